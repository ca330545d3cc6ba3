#include "mlq/printer.hpp"

#include <sstream>

#include "mlq/ml_core.hpp"

namespace mlq {

namespace {

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Literal:
    case Expr::Kind::Ref: return 8;
    case Expr::Kind::Unary: return e.unary == UnaryOp::Neg ? 7 : 3;
    case Expr::Kind::Binary:
      switch (e.binary) {
        case BinaryOp::Or: return 1;
        case BinaryOp::And: return 2;
        case BinaryOp::Add:
        case BinaryOp::Sub: return 5;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 6;
        default: return 4;
      }
  }
  return 8;
}

std::string wrap(const Expr& e, int minPrec) {
  auto s = print_expr(e);
  return precedence(e) < minPrec ? "(" + s + ")" : s;
}

class Writer {
 public:
  void line(int indent, const std::string& text) {
    out_ << std::string(static_cast<std::size_t>(indent) * 2, ' ') << text << '\n';
  }
  void blank() { out_ << '\n'; }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string join_names(const std::vector<NameRef>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i].name;
  }
  return out;
}

std::string join_exprs(const std::vector<Expr>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += print_expr(xs[i]);
  }
  return out;
}

void print_actions(Writer& w, int indent, const std::vector<Action>& actions);

void print_action(Writer& w, int indent, const Action& a) {
  switch (a.kind) {
    case Action::Kind::Assign: w.line(indent, a.target.name + " = " + print_expr(*a.value)); break;
    case Action::Kind::Send:
      w.line(indent, a.target.name + " ! " + a.message.name + "(" + join_exprs(a.args) + ")");
      break;
    case Action::Kind::Print: w.line(indent, "print " + print_expr(*a.value)); break;
    case Action::Kind::VarDecl:
      w.line(indent, "var " + a.target.name + " : " + std::string(to_string(a.dtype)) + " = " + print_expr(*a.value));
      break;
    case Action::Kind::If:
      w.line(indent, "if " + print_expr(*a.value) + " then");
      print_actions(w, indent + 1, a.thenActions);
      if (!a.elseActions.empty()) {
        w.line(indent, "else");
        print_actions(w, indent + 1, a.elseActions);
      }
      w.line(indent, "end");
      break;
    case Action::Kind::DaTrain: w.line(indent, "da_train " + a.target.name); break;
    case Action::Kind::DaSave: w.line(indent, "da_save " + a.target.name); break;
    case Action::Kind::DaPredict:
      w.line(indent, "da_predict " + a.target.name + " -> " + a.message.name + " (" + join_exprs(a.args) + ")");
      break;
    case Action::Kind::DaObserve:
      w.line(indent, "da_observe " + a.target.name + " (" + join_exprs(a.args) + " ; " + print_expr(*a.value) + ")");
      break;
  }
}

void print_actions(Writer& w, int indent, const std::vector<Action>& actions) {
  for (const auto& a : actions) print_action(w, indent, a);
}

void print_block(Writer& w, int indent, const std::string& head, const std::vector<Action>& actions) {
  w.line(indent, head + " {");
  print_actions(w, indent + 1, actions);
  w.line(indent, "}");
}

void print_thing(Writer& w, const ThingDef& t) {
  w.line(0, "thing " + t.name + " {");
  for (const auto& p : t.properties) {
    std::string text = "property " + p.name + " : " + std::string(to_string(p.dtype));
    if (p.initial) text += " = " + print_literal(*p.initial);
    w.line(1, text);
  }
  for (const auto& m : t.messages) {
    std::string params;
    for (std::size_t i = 0; i < m.params.size(); ++i) {
      if (i) params += ", ";
      params += m.params[i].name + " : " + std::string(to_string(m.params[i].dtype));
    }
    w.line(1, "message " + m.name + "(" + params + ")");
  }
  for (const auto& p : t.ports) {
    w.line(1, std::string(p.kind == PortKind::Provided ? "provided" : "required") + " port " + p.name + " {");
    if (!p.receives.empty()) w.line(2, "receives " + join_names(p.receives));
    if (!p.sends.empty()) w.line(2, "sends " + join_names(p.sends));
    w.line(1, "}");
  }
  for (const auto& da : t.analytics) {
    w.line(1, "data_analytics " + da.name + " {");
    w.line(2, "dataset " + print_literal(box_str(da.datasetPath)));
    w.line(2, "features " + join_names(da.features));
    w.line(2, "label " + da.label.name);
    if (da.algorithm.kind == AlgorithmSpec::Kind::Knn) {
      w.line(2, "model knn(" + std::to_string(da.algorithm.k) + ")");
    } else {
      w.line(2, "model linear_regression");
    }
    w.line(2, "save_to " + print_literal(box_str(da.modelPath)));
    w.line(1, "}");
  }
  w.line(1, "statechart init " + t.statechart.initialState.name + " {");
  for (const auto& s : t.statechart.states) {
    w.line(2, "state " + s.name + " {");
    if (!s.entryActions.empty()) print_block(w, 3, "on entry", s.entryActions);
    if (!s.exitActions.empty()) print_block(w, 3, "on exit", s.exitActions);
    for (const auto& tr : s.transitions) {
      std::string head = "transition -> " + tr.target.name + " event ";
      if (tr.trigger.kind == Trigger::Kind::After) {
        head += "after(" + std::to_string(tr.trigger.ticks) + ")";
      } else {
        head += tr.trigger.port.name + "?" + tr.trigger.message.name;
      }
      if (tr.guard) head += " guard " + print_expr(*tr.guard);
      if (tr.actions.empty()) {
        w.line(3, head);
      } else {
        print_block(w, 3, head + " action", tr.actions);
      }
    }
    w.line(2, "}");
  }
  w.line(1, "}");
  w.line(0, "}");
}

void print_configuration(Writer& w, const ConfigurationDef& c) {
  w.line(0, "configuration " + c.name + " {");
  for (const auto& i : c.instances) w.line(1, "instance " + i.name + " : " + i.thing.name);
  for (const auto& k : c.connectors) {
    w.line(1, "connector " + k.a.instance.name + "." + k.a.port.name + " <-> " + k.b.instance.name + "." +
                  k.b.port.name);
  }
  w.line(0, "}");
}

}  // namespace

std::string print_literal(const Value& v) {
  switch (v.index()) {
    case 0: return std::to_string(std::get<0>(v));
    case 1: {
      auto s = ml::format_shortest(std::get<1>(v));
      if (s.find_first_of(".e") == std::string::npos) s += ".0";
      return s;
    }
    case 2: return std::get<2>(v) ? "true" : "false";
    default: return "\"" + escape_text(std::get<3>(v)) + "\"";
  }
}

std::string print_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Literal: return print_literal(e.literal);
    case Expr::Kind::Ref: return e.name;
    case Expr::Kind::Unary:
      if (e.unary == UnaryOp::Neg) return "-" + wrap(e.operands[0], 7);
      return "not " + wrap(e.operands[0], 3);
    case Expr::Kind::Binary: {
      const int p = precedence(e);
      const bool comparison = p == 4;
      const auto lhs = wrap(e.operands[0], comparison ? 5 : p);
      const auto rhs = wrap(e.operands[1], comparison ? 5 : p + 1);
      return lhs + " " + std::string(to_string(e.binary)) + " " + rhs;
    }
  }
  return {};
}

std::string pretty_print(const Model& model) {
  Writer w;
  bool first = true;
  for (const auto& t : model.things) {
    if (!first) w.blank();
    first = false;
    print_thing(w, t);
  }
  for (const auto& c : model.configurations) {
    w.blank();
    print_configuration(w, c);
  }
  return w.str();
}

}  // namespace mlq
