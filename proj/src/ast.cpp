#include "mlq/ast.hpp"

#include <algorithm>

namespace mlq {

std::string_view to_string(DType t) {
  switch (t) {
    case DType::Int: return "Int";
    case DType::Real: return "Real";
    case DType::Bool: return "Bool";
    case DType::String: return "String";
  }
  return "?";
}

DType dtype_of(const Value& v) { return static_cast<DType>(v.index()); }

Value zero_value(DType t) {
  switch (t) {
    case DType::Int: return box_int(0);
    case DType::Real: return box_real(0.0);
    case DType::Bool: return box_bool(false);
    case DType::String: return box_str("");
  }
  return box_int(0);
}

bool is_numeric(DType t) { return t == DType::Int || t == DType::Real; }

std::string_view to_string(UnaryOp op) { return op == UnaryOp::Neg ? "-" : "not"; }

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
  }
  return "?";
}

Expr Expr::lit(Value v, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Literal;
  e.literal = std::move(v);
  e.loc = loc;
  return e;
}

Expr Expr::ref_to(std::string name, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Ref;
  e.name = std::move(name);
  e.loc = loc;
  return e;
}

Expr Expr::unary_of(UnaryOp op, Expr operand, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Unary;
  e.unary = op;
  e.loc = loc;
  e.operands.push_back(std::move(operand));
  return e;
}

Expr Expr::binary_of(BinaryOp op, Expr l, Expr r, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Binary;
  e.binary = op;
  e.loc = loc;
  e.operands.push_back(std::move(l));
  e.operands.push_back(std::move(r));
  return e;
}

namespace {

template <typename T>
const T* find_named(const std::vector<T>& xs, std::string_view n) {
  for (const auto& x : xs) {
    if (x.name == n) return &x;
  }
  return nullptr;
}

template <typename T>
int index_named(const std::vector<T>& xs, std::string_view n) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].name == n) return static_cast<int>(i);
  }
  return -1;
}

bool contains(const std::vector<NameRef>& xs, std::string_view n) {
  return std::any_of(xs.begin(), xs.end(), [&](const NameRef& r) { return r.name == n; });
}

}  // namespace

bool PortDef::receives_message(std::string_view m) const { return contains(receives, m); }
bool PortDef::sends_message(std::string_view m) const { return contains(sends, m); }

const PropertyDef* ThingDef::find_property(std::string_view n) const { return find_named(properties, n); }
const MessageDef* ThingDef::find_message(std::string_view n) const { return find_named(messages, n); }
const PortDef* ThingDef::find_port(std::string_view n) const { return find_named(ports, n); }
const DataAnalyticsDef* ThingDef::find_analytics(std::string_view n) const { return find_named(analytics, n); }
const StateDef* ThingDef::find_state(std::string_view n) const { return find_named(statechart.states, n); }
int ThingDef::state_index(std::string_view n) const { return index_named(statechart.states, n); }
int ThingDef::property_index(std::string_view n) const { return index_named(properties, n); }
int ThingDef::analytics_index(std::string_view n) const { return index_named(analytics, n); }

const InstanceDef* ConfigurationDef::find_instance(std::string_view n) const { return find_named(instances, n); }

const ThingDef* Model::find_thing(std::string_view n) const { return find_named(things, n); }
const ConfigurationDef* Model::find_configuration(std::string_view n) const {
  return find_named(configurations, n);
}

// ---------------------------------------------------------------------------
// Structural equality

namespace {

template <typename T, typename Eq>
bool all_equal(const std::vector<T>& a, const std::vector<T>& b, Eq eq) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!eq(a[i], b[i])) return false;
  }
  return true;
}

bool names_equal(const std::vector<NameRef>& a, const std::vector<NameRef>& b) {
  return all_equal(a, b, [](const NameRef& x, const NameRef& y) { return x.name == y.name; });
}

bool opt_expr_equal(const std::optional<Expr>& a, const std::optional<Expr>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || expr_equals(*a, *b);
}

bool action_equals(const Action& a, const Action& b);

bool actions_equal(const std::vector<Action>& a, const std::vector<Action>& b) {
  return all_equal(a, b, action_equals);
}

bool action_equals(const Action& a, const Action& b) {
  if (a.kind != b.kind || a.target.name != b.target.name || a.message.name != b.message.name) return false;
  if (a.kind == Action::Kind::VarDecl && a.dtype != b.dtype) return false;
  return opt_expr_equal(a.value, b.value) && all_equal(a.args, b.args, expr_equals) &&
         actions_equal(a.thenActions, b.thenActions) && actions_equal(a.elseActions, b.elseActions);
}

bool trigger_equals(const Trigger& a, const Trigger& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == Trigger::Kind::After) return a.ticks == b.ticks;
  return a.port.name == b.port.name && a.message.name == b.message.name;
}

bool transition_equals(const TransitionDef& a, const TransitionDef& b) {
  return a.target.name == b.target.name && trigger_equals(a.trigger, b.trigger) &&
         opt_expr_equal(a.guard, b.guard) && actions_equal(a.actions, b.actions);
}

bool state_equals(const StateDef& a, const StateDef& b) {
  return a.name == b.name && actions_equal(a.entryActions, b.entryActions) &&
         actions_equal(a.exitActions, b.exitActions) && all_equal(a.transitions, b.transitions, transition_equals);
}

bool thing_equals(const ThingDef& a, const ThingDef& b) {
  if (a.name != b.name) return false;
  const bool props = all_equal(a.properties, b.properties, [](const PropertyDef& x, const PropertyDef& y) {
    return x.name == y.name && x.dtype == y.dtype && x.initial == y.initial;
  });
  const bool msgs = all_equal(a.messages, b.messages, [](const MessageDef& x, const MessageDef& y) {
    return x.name == y.name && all_equal(x.params, y.params, [](const ParamDef& p, const ParamDef& q) {
             return p.name == q.name && p.dtype == q.dtype;
           });
  });
  const bool ports = all_equal(a.ports, b.ports, [](const PortDef& x, const PortDef& y) {
    return x.name == y.name && x.kind == y.kind && names_equal(x.receives, y.receives) &&
           names_equal(x.sends, y.sends);
  });
  const bool das = all_equal(a.analytics, b.analytics, [](const DataAnalyticsDef& x, const DataAnalyticsDef& y) {
    return x.name == y.name && x.datasetPath == y.datasetPath && names_equal(x.features, y.features) &&
           x.label.name == y.label.name && x.algorithm.kind == y.algorithm.kind &&
           x.algorithm.k == y.algorithm.k && x.modelPath == y.modelPath;
  });
  return props && msgs && ports && das && a.statechart.initialState.name == b.statechart.initialState.name &&
         all_equal(a.statechart.states, b.statechart.states, state_equals);
}

bool configuration_equals(const ConfigurationDef& a, const ConfigurationDef& b) {
  const auto endpoint_eq = [](const PortEndpoint& x, const PortEndpoint& y) {
    return x.instance.name == y.instance.name && x.port.name == y.port.name;
  };
  return a.name == b.name &&
         all_equal(a.instances, b.instances,
                   [](const InstanceDef& x, const InstanceDef& y) {
                     return x.name == y.name && x.thing.name == y.thing.name;
                   }) &&
         all_equal(a.connectors, b.connectors, [&](const ConnectorDef& x, const ConnectorDef& y) {
           return endpoint_eq(x.a, y.a) && endpoint_eq(x.b, y.b);
         });
}

}  // namespace

bool expr_equals(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Literal: return a.literal == b.literal;
    case Expr::Kind::Ref: return a.name == b.name;
    case Expr::Kind::Unary: return a.unary == b.unary && expr_equals(a.operands[0], b.operands[0]);
    case Expr::Kind::Binary:
      return a.binary == b.binary && expr_equals(a.operands[0], b.operands[0]) &&
             expr_equals(a.operands[1], b.operands[1]);
  }
  return false;
}

bool model_equals(const Model& a, const Model& b) {
  return all_equal(a.things, b.things, thing_equals) &&
         all_equal(a.configurations, b.configurations, configuration_equals);
}

}  // namespace mlq
