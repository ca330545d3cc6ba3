#include "mlq/validator.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "mlq/ml_core.hpp"
#include "mlq/resolve.hpp"

namespace mlq {

TypeMismatch::TypeMismatch(SourceLoc l, std::string exp, std::string fnd)
    : std::runtime_error("type mismatch: expected " + exp + ", found " + fnd),
      loc(l),
      expected(std::move(exp)),
      found(std::move(fnd)) {}

std::optional<std::vector<std::string>> DirectoryDatasetAccess::header(std::string_view datasetPath) const {
  std::ifstream in(base_ / std::filesystem::path(std::string(datasetPath)), std::ios::binary);
  if (!in) return std::nullopt;
  std::string first;
  std::getline(in, first);
  return ml::parse_csv_header(first);
}

namespace {

struct Mismatch {
  SourceLoc loc;
  std::string expected;
  std::string found;
};

std::string type_name(DType t) { return std::string(to_string(t)); }

bool assignable(DType target, DType value) { return target == value || (target == DType::Real && value == DType::Int); }

/// Expression typing. Unbound references have no type and suppress further
/// mismatches in the enclosing expression.
class ExprTyper {
 public:
  explicit ExprTyper(std::vector<Mismatch>& out) : out_(out) {}

  std::optional<DType> type(const Expr& e, const TypeScope& scope) {
    switch (e.kind) {
      case Expr::Kind::Literal: return dtype_of(e.literal);
      case Expr::Kind::Ref: return ref_type(e, scope);
      case Expr::Kind::Unary: {
        const auto t = type(e.operands[0], scope);
        if (!t) return std::nullopt;
        if (e.unary == UnaryOp::Not) {
          if (*t != DType::Bool) return mismatch(e.loc, "Bool", *t);
          return DType::Bool;
        }
        if (!is_numeric(*t)) return mismatch(e.loc, "Int or Real", *t);
        return *t;
      }
      case Expr::Kind::Binary: return binary_type(e, scope);
    }
    return std::nullopt;
  }

 private:
  std::optional<DType> mismatch(SourceLoc loc, std::string expected, DType found) {
    out_.push_back({loc, std::move(expected), type_name(found)});
    return std::nullopt;
  }

  static std::optional<DType> ref_type(const Expr& e, const TypeScope& scope) {
    const auto slot = static_cast<std::size_t>(e.slot);
    switch (e.ref) {
      case RefKind::Property:
        if (scope.thing && slot < scope.thing->properties.size()) return scope.thing->properties[slot].dtype;
        return std::nullopt;
      case RefKind::Local:
        if (slot < scope.locals.size()) return scope.locals[slot];
        return std::nullopt;
      case RefKind::Param:
        if (scope.message && slot < scope.message->params.size()) return scope.message->params[slot].dtype;
        return std::nullopt;
      case RefKind::Unbound: return std::nullopt;
    }
    return std::nullopt;
  }

  std::optional<DType> binary_type(const Expr& e, const TypeScope& scope) {
    const auto l = type(e.operands[0], scope);
    const auto r = type(e.operands[1], scope);
    if (!l || !r) return std::nullopt;
    switch (e.binary) {
      case BinaryOp::Add:
      case BinaryOp::Sub:
      case BinaryOp::Mul:
      case BinaryOp::Div:
        if (!is_numeric(*l)) return mismatch(e.operands[0].loc, "Int or Real", *l);
        if (!is_numeric(*r)) return mismatch(e.operands[1].loc, "Int or Real", *r);
        if (e.binary == BinaryOp::Div) return DType::Real;
        return (*l == DType::Int && *r == DType::Int) ? DType::Int : DType::Real;
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge:
        if (!is_numeric(*l)) return mismatch(e.operands[0].loc, "Int or Real", *l);
        if (!is_numeric(*r)) return mismatch(e.operands[1].loc, "Int or Real", *r);
        return DType::Bool;
      case BinaryOp::Eq:
      case BinaryOp::Ne:
        if (*l != *r && !(is_numeric(*l) && is_numeric(*r))) return mismatch(e.operands[1].loc, type_name(*l), *r);
        return DType::Bool;
      case BinaryOp::And:
      case BinaryOp::Or:
        if (*l != DType::Bool) return mismatch(e.operands[0].loc, "Bool", *l);
        if (*r != DType::Bool) return mismatch(e.operands[1].loc, "Bool", *r);
        return DType::Bool;
    }
    return std::nullopt;
  }

  std::vector<Mismatch>& out_;
};

class Validator {
 public:
  Validator(const Model& source, const DatasetAccess* datasets) : source_(source), datasets_(datasets) {}

  ValidationReport run() {
    std::vector<ResolveError> errors;
    const auto bound = bind_best_effort(source_, errors);
    for (const auto& e : errors) {
      const char* code = e.kind == ResolveError::Kind::UnresolvedReference ? "VAL001" : "VAL002";
      error(code, e.loc, e.message);
    }
    for (const auto& t : bound.model.things) check_thing(t);
    for (const auto& c : bound.model.configurations) check_configuration(bound.model, c);

    ValidationReport report;
    report.diagnostics = std::move(diags_);
    std::stable_sort(report.diagnostics.begin(), report.diagnostics.end(),
                     [](const Diagnostic& a, const Diagnostic& b) {
                       return a.line != b.line ? a.line < b.line : a.col < b.col;
                     });
    report.valid = !has_errors(report.diagnostics);
    return report;
  }

 private:
  void error(const char* code, SourceLoc loc, std::string msg) {
    diags_.push_back({Severity::Error, code, std::move(msg), loc.line, loc.col});
  }
  void warning(const char* code, SourceLoc loc, std::string msg) {
    diags_.push_back({Severity::Warning, code, std::move(msg), loc.line, loc.col});
  }

  // Types `e`, reporting mismatches inside it as VAL003.
  std::optional<DType> type(const Expr& e, const TypeScope& scope) {
    std::vector<Mismatch> ms;
    const auto t = ExprTyper(ms).type(e, scope);
    for (const auto& m : ms) {
      error("VAL003", m.loc, "type mismatch: expected " + m.expected + ", found " + m.found);
    }
    return t;
  }

  void check_thing(const ThingDef& t) {
    for (const auto& p : t.properties) {
      if (p.initial && dtype_of(*p.initial) != p.dtype) {
        error("VAL003", p.initialLoc,
              "initial value of property '" + p.name + "' has type " + type_name(dtype_of(*p.initial)) +
                  ", expected " + type_name(p.dtype));
      }
    }
    for (const auto& da : t.analytics) check_analytics(da);

    for (const auto& s : t.statechart.states) {
      check_block(t, nullptr, s.entryActions);
      check_block(t, nullptr, s.exitActions);
      for (const auto& tr : s.transitions) {
        const MessageDef* msg = nullptr;
        if (tr.trigger.kind == Trigger::Kind::After) {
          if (tr.trigger.ticks < 1) error("VAL010", tr.trigger.loc, "after() requires at least 1 tick");
        } else if (const auto* port = t.find_port(tr.trigger.port.name);
                   port && port->receives_message(tr.trigger.message.name)) {
          msg = t.find_message(tr.trigger.message.name);
        }
        TypeScope scope{&t, msg, {}};
        if (tr.guard) {
          const auto g = type(*tr.guard, scope);
          if (g && *g != DType::Bool) {
            error("VAL008", tr.guard->loc, "guard must be Bool, found " + type_name(*g));
          }
        }
        check_actions(tr.actions, scope);
      }
    }
    check_reachability(t);
  }

  void check_analytics(const DataAnalyticsDef& da) {
    if (da.algorithm.kind == AlgorithmSpec::Kind::Knn && da.algorithm.k < 1) {
      error("VAL010", da.algorithm.loc, "knn() requires k >= 1");
    }
    if (!datasets_) return;
    const auto header = datasets_->header(da.datasetPath);
    if (!header) {
      if (datasets_->report_missing()) error("VAL007", da.loc, "dataset '" + da.datasetPath + "' not found");
      return;
    }
    auto require = [&](const NameRef& col) {
      if (std::find(header->begin(), header->end(), col.name) == header->end()) {
        error("VAL007", col.loc, "column '" + col.name + "' missing from dataset '" + da.datasetPath + "'");
      }
    };
    for (const auto& f : da.features) require(f);
    require(da.label);
  }

  void check_block(const ThingDef& t, const MessageDef* msg, const std::vector<Action>& actions) {
    TypeScope scope{&t, msg, {}};
    check_actions(actions, scope);
  }

  void check_actions(const std::vector<Action>& actions, TypeScope& scope) {
    for (const auto& a : actions) check_action(a, scope);
  }

  std::optional<DType> target_type(const Action& a, const NameRef& name, const TypeScope& scope) {
    const auto slot = static_cast<std::size_t>(a.slot);
    switch (a.ref) {
      case RefKind::Property: return scope.thing->properties[slot].dtype;
      case RefKind::Local:
        if (slot < scope.locals.size()) return scope.locals[slot];
        return std::nullopt;
      case RefKind::Param: error("VAL003", name.loc, "cannot assign to message parameter '" + name.name + "'"); return std::nullopt;
      case RefKind::Unbound: return std::nullopt;
    }
    return std::nullopt;
  }

  void check_action(const Action& a, TypeScope& scope) {
    const ThingDef& t = *scope.thing;
    switch (a.kind) {
      case Action::Kind::Assign: {
        const auto target = target_type(a, a.target, scope);
        const auto value = type(*a.value, scope);
        if (target && value && !assignable(*target, *value)) {
          error("VAL003", a.value->loc,
                "cannot assign " + type_name(*value) + " to '" + a.target.name + "' of type " + type_name(*target));
        }
        break;
      }
      case Action::Kind::VarDecl: {
        const auto value = type(*a.value, scope);
        if (value && !assignable(a.dtype, *value)) {
          error("VAL003", a.value->loc,
                "cannot initialize '" + a.target.name + "' of type " + type_name(a.dtype) + " with " +
                    type_name(*value));
        }
        if (a.slot >= 0) {
          if (scope.locals.size() <= static_cast<std::size_t>(a.slot)) scope.locals.resize(static_cast<std::size_t>(a.slot) + 1, DType::Int);
          scope.locals[static_cast<std::size_t>(a.slot)] = a.dtype;
        }
        break;
      }
      case Action::Kind::Print: type(*a.value, scope); break;
      case Action::Kind::Send: {
        std::vector<std::optional<DType>> argTypes;
        for (const auto& e : a.args) argTypes.push_back(type(e, scope));
        const auto* port = t.find_port(a.target.name);
        if (!port || !port->sends_message(a.message.name)) break;
        const auto* msg = t.find_message(a.message.name);
        if (!msg) break;
        if (msg->params.size() != a.args.size()) {
          error("VAL004", a.loc,
                "message '" + msg->name + "' takes " + std::to_string(msg->params.size()) + " argument(s), " +
                    std::to_string(a.args.size()) + " given");
          break;
        }
        for (std::size_t i = 0; i < a.args.size(); ++i) {
          if (argTypes[i] && !assignable(msg->params[i].dtype, *argTypes[i])) {
            error("VAL004", a.args[i].loc,
                  "argument '" + msg->params[i].name + "' of message '" + msg->name + "' expects " +
                      type_name(msg->params[i].dtype) + ", found " + type_name(*argTypes[i]));
          }
        }
        break;
      }
      case Action::Kind::If: {
        const auto cond = type(*a.value, scope);
        if (cond && *cond != DType::Bool) {
          error("VAL003", a.value->loc, "if condition must be Bool, found " + type_name(*cond));
        }
        check_actions(a.thenActions, scope);
        check_actions(a.elseActions, scope);
        break;
      }
      case Action::Kind::DaTrain:
      case Action::Kind::DaSave: break;
      case Action::Kind::DaPredict:
      case Action::Kind::DaObserve: {
        for (const auto& e : a.args) numeric(e, scope);
        if (a.kind == Action::Kind::DaObserve) numeric(*a.value, scope);
        const auto* da = t.find_analytics(a.target.name);
        if (da && da->features.size() != a.args.size()) {
          error("VAL009", a.loc,
                std::string(a.kind == Action::Kind::DaPredict ? "da_predict" : "da_observe") + " on '" + da->name +
                    "' needs " + std::to_string(da->features.size()) + " feature value(s), " +
                    std::to_string(a.args.size()) + " given");
        }
        if (a.kind == Action::Kind::DaPredict) {
          const auto target = target_type(a, a.message, scope);
          if (target && *target != DType::Real) {
            error("VAL003", a.message.loc,
                  "prediction target '" + a.message.name + "' must be Real, found " + type_name(*target));
          }
        }
        break;
      }
    }
  }

  void numeric(const Expr& e, const TypeScope& scope) {
    const auto t = type(e, scope);
    if (t && !is_numeric(*t)) error("VAL003", e.loc, "expected Int or Real, found " + type_name(*t));
  }

  // States not reachable from the initial state along any transition.
  void check_reachability(const ThingDef& t) {
    const auto& states = t.statechart.states;
    const int init = t.state_index(t.statechart.initialState.name);
    if (init < 0) return;
    std::vector<bool> seen(states.size(), false);
    std::vector<int> work{init};
    seen[static_cast<std::size_t>(init)] = true;
    while (!work.empty()) {
      const int s = work.back();
      work.pop_back();
      for (const auto& tr : states[static_cast<std::size_t>(s)].transitions) {
        const int next = t.state_index(tr.target.name);
        if (next >= 0 && !seen[static_cast<std::size_t>(next)]) {
          seen[static_cast<std::size_t>(next)] = true;
          work.push_back(next);
        }
      }
    }
    std::set<std::string> reported;
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (!seen[i] && reported.insert(states[i].name).second) {
        warning("VAL005", states[i].loc, "state '" + states[i].name + "' of thing '" + t.name + "' is unreachable");
      }
    }
  }

  void check_configuration(const Model& m, const ConfigurationDef& c) {
    auto endpoint = [&](const PortEndpoint& ep) -> std::pair<const ThingDef*, const PortDef*> {
      const auto* inst = c.find_instance(ep.instance.name);
      if (!inst) return {nullptr, nullptr};
      const auto* thing = m.find_thing(inst->thing.name);
      if (!thing) return {nullptr, nullptr};
      return {thing, thing->find_port(ep.port.name)};
    };
    for (const auto& k : c.connectors) {
      const auto [ta, pa] = endpoint(k.a);
      const auto [tb, pb] = endpoint(k.b);
      if (!pa || !pb) continue;
      const std::string where = k.a.instance.name + "." + k.a.port.name + " <-> " + k.b.instance.name + "." + k.b.port.name;
      if (pa->kind == pb->kind) {
        error("VAL006", k.loc,
              "connector " + where + " joins two " + (pa->kind == PortKind::Provided ? "provided" : "required") +
                  " ports");
        continue;
      }
      check_direction(*ta, *pa, *tb, *pb, k.loc, where);
      check_direction(*tb, *pb, *ta, *pa, k.loc, where);
    }
  }

  // Every message sent by `from` must be received by `to` with the same
  // parameter types.
  void check_direction(const ThingDef& fromThing, const PortDef& from, const ThingDef& toThing, const PortDef& to,
                       SourceLoc loc, const std::string& where) {
    for (const auto& m : from.sends) {
      if (!to.receives_message(m.name)) {
        error("VAL006", loc, "connector " + where + ": message '" + m.name + "' sent by port '" + from.name +
                                 "' is not received by port '" + to.name + "'");
        continue;
      }
      const auto* sm = fromThing.find_message(m.name);
      const auto* rm = toThing.find_message(m.name);
      if (!sm || !rm) continue;
      bool same = sm->params.size() == rm->params.size();
      for (std::size_t i = 0; same && i < sm->params.size(); ++i) same = sm->params[i].dtype == rm->params[i].dtype;
      if (!same) {
        error("VAL006", loc, "connector " + where + ": message '" + m.name + "' has different parameter types in '" +
                                 fromThing.name + "' and '" + toThing.name + "'");
      }
    }
  }

  const Model& source_;
  const DatasetAccess* datasets_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

ValidationReport validate(const Model& model, const DatasetAccess* datasets) {
  return Validator(model, datasets).run();
}

DType type_of(const Expr& expr, const TypeScope& scope) {
  std::vector<Mismatch> ms;
  const auto t = ExprTyper(ms).type(expr, scope);
  if (!ms.empty()) throw TypeMismatch(ms.front().loc, ms.front().expected, ms.front().found);
  if (!t) throw TypeMismatch(expr.loc, "resolved expression", "unbound reference");
  return *t;
}

}  // namespace mlq
