#pragma once

// Deterministic discrete-time executor for one configuration of a resolved
// model.
//
// One tick runs, in order:
//   1. on tick 0 only, STATE_ENTER and entry actions of every initial state;
//   2. per instance (declaration order), at most one timed transition: the
//      first `after(n)` transition of the current state with
//      tick - stateEntryTick >= n whose guard holds;
//   3. per instance, every event that was in its mailbox when the tick began,
//      each handled to completion by the first matching transition whose
//      guard holds. Unmatched events are dropped without a trace.
// Messages sent during tick t are delivered at tick t + 1.

#include <deque>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mlq/resolve.hpp"
#include "mlq/runtime_support.hpp"

namespace mlq::sim {

using rt::TraceEvent;
using Trace = std::vector<TraceEvent>;

struct SimOptions {
  std::filesystem::path dataDir = ".";  // base for dataset paths
  std::filesystem::path saveDir = ".";  // base for da_save model paths
};

/// A value of the wrong runtime type reached an operation. Only a validator
/// soundness bug can cause it.
class RuntimeTypeFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InstanceState {
  std::string name;
  int thing = -1;         // index into Model::things
  int currentState = -1;  // index into the thing's states
  std::vector<Value> propertyValues;
  std::deque<rt::Event> mailbox;   // deliverable this tick
  std::vector<rt::Event> pending;  // deliverable next tick
  Int stateEntryTick = 0;
  std::vector<rt::AnalyticsSlot> analytics;  // by data_analytics index
};

struct SimState {
  Int tick = 0;
  std::vector<InstanceState> instances;  // configuration declaration order
};

/// Builds the tick-0 state of `configName`. Throws UnknownConfiguration.
SimState instantiate(const ResolvedModel& model, std::string_view configName, const SimOptions& options = {});

class Simulation {
 public:
  Simulation(ResolvedModel model, std::string_view configName, SimOptions options = {});

  /// Executes one tick and returns its trace events.
  Trace step();

  /// No pending messages and no timed transition can ever fire again.
  bool quiescent() const;

  const SimState& state() const { return state_; }
  const ResolvedModel& model() const { return model_; }

 private:
  struct Route {
    int from;
    std::string fromPort;
    int to;
    std::string toPort;
  };
  struct Frame {
    std::vector<Value> locals;
    const std::vector<Value>* params = nullptr;
  };

  const ThingDef& thing_of(const InstanceState& inst) const;
  Value eval(const Expr& e, const InstanceState& inst, const Frame& frame) const;
  bool eval_guard(const TransitionDef& tr, const InstanceState& inst, const std::vector<Value>* params) const;
  void exec(const std::vector<Action>& actions, InstanceState& inst, Frame& frame);
  void exec_action(const Action& a, InstanceState& inst, Frame& frame);
  void assign(const Action& a, InstanceState& inst, Frame& frame, Value v);
  void fire(InstanceState& inst, const TransitionDef& tr, const std::vector<Value>* params);
  void enter(InstanceState& inst, int stateIndex);
  void emit(const InstanceState& inst, rt::TraceKind kind, std::string detail);
  rt::Emit emitter(const InstanceState& inst);
  void send(const InstanceState& from, const std::string& port, const std::string& message, std::vector<Value> args);

  ResolvedModel model_;
  const ConfigurationDef* config_ = nullptr;
  SimOptions options_;
  SimState state_;
  std::vector<Route> routes_;
  Trace* out_ = nullptr;
};

/// Steps until `maxTicks` ticks have run or the configuration is quiescent.
Trace run(const ResolvedModel& model, std::string_view configName, Int maxTicks, const SimOptions& options = {});

}  // namespace mlq::sim
