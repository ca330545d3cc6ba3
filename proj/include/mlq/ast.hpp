#pragma once

// Abstract syntax of the modeling language: things with properties,
// messages, ports, data-analytics blocks and a flat statechart, plus
// deployment configurations wiring thing instances together.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlq/value.hpp"

namespace mlq {

struct SourceLoc {
  int line = 0;
  int col = 0;

  friend bool operator==(const SourceLoc&, const SourceLoc&) = default;
};

enum class DType { Int, Real, Bool, String };

std::string_view to_string(DType t);
DType dtype_of(const Value& v);
Value zero_value(DType t);
bool is_numeric(DType t);

/// A name occurrence in the source.
struct NameRef {
  SourceLoc loc;
  std::string name;
};

enum class UnaryOp { Neg, Not };
enum class BinaryOp { Add, Sub, Mul, Div, Lt, Le, Gt, Ge, Eq, Ne, And, Or };

std::string_view to_string(UnaryOp op);
std::string_view to_string(BinaryOp op);

/// What a name in an expression or assignment target denotes. Filled in by
/// name resolution; the parser leaves it Unbound.
enum class RefKind { Unbound, Property, Local, Param };

struct Expr {
  enum class Kind { Literal, Ref, Unary, Binary };

  Kind kind = Kind::Literal;
  SourceLoc loc;
  Value literal;               // Literal
  std::string name;            // Ref
  RefKind ref = RefKind::Unbound;
  int slot = -1;               // property index, local slot or param index
  UnaryOp unary = UnaryOp::Neg;
  BinaryOp binary = BinaryOp::Add;
  std::vector<Expr> operands;  // 1 for Unary, 2 for Binary

  static Expr lit(Value v, SourceLoc loc = {});
  static Expr ref_to(std::string name, SourceLoc loc = {});
  static Expr unary_of(UnaryOp op, Expr e, SourceLoc loc = {});
  static Expr binary_of(BinaryOp op, Expr l, Expr r, SourceLoc loc = {});
};

struct Action {
  enum class Kind { Assign, Send, Print, VarDecl, If, DaTrain, DaPredict, DaSave, DaObserve };

  Kind kind = Kind::Print;
  SourceLoc loc;
  // Assign/VarDecl/DaPredict: assigned name. Send: port. Da*: block name.
  NameRef target;
  NameRef message;             // Send: message. DaPredict: result target.
  DType dtype = DType::Int;    // VarDecl
  std::optional<Expr> value;   // Assign/Print/VarDecl value, If condition, DaObserve label
  std::vector<Expr> args;      // Send args, DaPredict/DaObserve features
  std::vector<Action> thenActions;
  std::vector<Action> elseActions;
  // Binding of the assigned name (Assign/VarDecl target, DaPredict result).
  RefKind ref = RefKind::Unbound;
  int slot = -1;
};

struct Trigger {
  enum class Kind { Message, After };

  Kind kind = Kind::Message;
  SourceLoc loc;
  NameRef port;
  NameRef message;
  Int ticks = 0;
};

struct TransitionDef {
  SourceLoc loc;
  NameRef target;
  Trigger trigger;
  std::optional<Expr> guard;
  std::vector<Action> actions;
};

struct StateDef {
  SourceLoc loc;
  std::string name;
  std::vector<Action> entryActions;
  std::vector<Action> exitActions;
  std::vector<TransitionDef> transitions;
};

struct StatechartDef {
  SourceLoc loc;
  NameRef initialState;
  std::vector<StateDef> states;
};

struct PropertyDef {
  SourceLoc loc;
  std::string name;
  DType dtype = DType::Int;
  std::optional<Value> initial;
  SourceLoc initialLoc;
};

struct ParamDef {
  SourceLoc loc;
  std::string name;
  DType dtype = DType::Int;
};

struct MessageDef {
  SourceLoc loc;
  std::string name;
  std::vector<ParamDef> params;
};

enum class PortKind { Provided, Required };

struct PortDef {
  SourceLoc loc;
  std::string name;
  PortKind kind = PortKind::Provided;
  std::vector<NameRef> receives;
  std::vector<NameRef> sends;

  bool receives_message(std::string_view m) const;
  bool sends_message(std::string_view m) const;
};

struct AlgorithmSpec {
  enum class Kind { LinearRegression, Knn };

  Kind kind = Kind::LinearRegression;
  Int k = 0;
  SourceLoc loc;
};

struct DataAnalyticsDef {
  SourceLoc loc;
  std::string name;
  std::string datasetPath;
  std::vector<NameRef> features;
  NameRef label;
  AlgorithmSpec algorithm;
  std::string modelPath;
};

struct ThingDef {
  SourceLoc loc;
  std::string name;
  std::vector<PropertyDef> properties;
  std::vector<MessageDef> messages;
  std::vector<PortDef> ports;
  std::vector<DataAnalyticsDef> analytics;
  StatechartDef statechart;

  const PropertyDef* find_property(std::string_view n) const;
  const MessageDef* find_message(std::string_view n) const;
  const PortDef* find_port(std::string_view n) const;
  const DataAnalyticsDef* find_analytics(std::string_view n) const;
  const StateDef* find_state(std::string_view n) const;
  int state_index(std::string_view n) const;
  int property_index(std::string_view n) const;
  int analytics_index(std::string_view n) const;
};

struct InstanceDef {
  SourceLoc loc;
  std::string name;
  NameRef thing;
};

struct PortEndpoint {
  NameRef instance;
  NameRef port;
};

struct ConnectorDef {
  SourceLoc loc;
  PortEndpoint a;
  PortEndpoint b;
};

struct ConfigurationDef {
  SourceLoc loc;
  std::string name;
  std::vector<InstanceDef> instances;
  std::vector<ConnectorDef> connectors;

  const InstanceDef* find_instance(std::string_view n) const;
};

struct Model {
  std::vector<ThingDef> things;
  std::vector<ConfigurationDef> configurations;
  std::string sourceName;

  const ThingDef* find_thing(std::string_view n) const;
  const ConfigurationDef* find_configuration(std::string_view n) const;
};

/// Structural equality ignoring source locations, name bindings and the
/// source name.
bool model_equals(const Model& a, const Model& b);
bool expr_equals(const Expr& a, const Expr& b);

}  // namespace mlq
