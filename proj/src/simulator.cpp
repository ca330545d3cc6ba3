#include "mlq/simulator.hpp"

namespace mlq::sim {

namespace {

Value coerce(Value v, DType target) {
  if (target == DType::Real && v.index() == 0) return box_real(to_real(std::get<0>(v)));
  return v;
}

[[noreturn]] void fault(const std::string& what) { throw RuntimeTypeFault("runtime type fault: " + what); }

double as_real(const Value& v) {
  if (v.index() == 0) return to_real(std::get<0>(v));
  if (v.index() == 1) return std::get<1>(v);
  fault("expected a number");
}

bool as_bool(const Value& v) {
  if (v.index() != 2) fault("expected Bool");
  return std::get<2>(v);
}

bool numeric(const Value& v) { return v.index() == 0 || v.index() == 1; }

ml::TrainSpec train_spec(const DataAnalyticsDef& da) {
  ml::TrainSpec spec;
  for (const auto& f : da.features) spec.features.push_back(f.name);
  spec.label = da.label.name;
  if (da.algorithm.kind == AlgorithmSpec::Kind::Knn) {
    spec.algorithm = {ml::AlgorithmKind::KnnRegression, static_cast<int>(da.algorithm.k)};
  } else {
    spec.algorithm = {ml::AlgorithmKind::LinearRegression, 0};
  }
  return spec;
}

}  // namespace

SimState instantiate(const ResolvedModel& model, std::string_view configName, const SimOptions& options) {
  const auto* config = model.model.find_configuration(configName);
  if (!config) throw UnknownConfiguration("unknown configuration '" + std::string(configName) + "'");
  SimState state;
  for (const auto& inst : config->instances) {
    InstanceState is;
    is.name = inst.name;
    for (std::size_t i = 0; i < model.model.things.size(); ++i) {
      if (model.model.things[i].name == inst.thing.name) is.thing = static_cast<int>(i);
    }
    if (is.thing < 0) throw UnknownConfiguration("instance '" + inst.name + "' has an unknown thing");
    const auto& thing = model.model.things[static_cast<std::size_t>(is.thing)];
    is.currentState = thing.state_index(thing.statechart.initialState.name);
    for (const auto& p : thing.properties) is.propertyValues.push_back(p.initial ? *p.initial : zero_value(p.dtype));
    for (const auto& da : thing.analytics) {
      is.analytics.emplace_back(da.name, train_spec(da), options.dataDir / da.datasetPath, da.modelPath,
                                options.saveDir / da.modelPath);
    }
    state.instances.push_back(std::move(is));
  }
  return state;
}

Simulation::Simulation(ResolvedModel model, std::string_view configName, SimOptions options)
    : model_(std::move(model)), options_(std::move(options)) {
  state_ = instantiate(model_, configName, options_);
  config_ = model_.model.find_configuration(configName);
  auto index_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < config_->instances.size(); ++i) {
      if (config_->instances[i].name == name) return static_cast<int>(i);
    }
    return -1;
  };
  for (const auto& k : config_->connectors) {
    const int a = index_of(k.a.instance.name);
    const int b = index_of(k.b.instance.name);
    routes_.push_back({a, k.a.port.name, b, k.b.port.name});
    routes_.push_back({b, k.b.port.name, a, k.a.port.name});
  }
}

const ThingDef& Simulation::thing_of(const InstanceState& inst) const {
  return model_.model.things[static_cast<std::size_t>(inst.thing)];
}

void Simulation::emit(const InstanceState& inst, rt::TraceKind kind, std::string detail) {
  out_->push_back(TraceEvent{state_.tick, inst.name, kind, std::move(detail)});
}

rt::Emit Simulation::emitter(const InstanceState& inst) {
  return [this, &inst](rt::TraceKind kind, std::string detail) { emit(inst, kind, std::move(detail)); };
}

Value Simulation::eval(const Expr& e, const InstanceState& inst, const Frame& frame) const {
  switch (e.kind) {
    case Expr::Kind::Literal: return e.literal;
    case Expr::Kind::Ref: {
      const auto slot = static_cast<std::size_t>(e.slot);
      switch (e.ref) {
        case RefKind::Property: return inst.propertyValues.at(slot);
        case RefKind::Local:
          if (slot >= frame.locals.size()) fault("read of undeclared local '" + e.name + "'");
          return frame.locals[slot];
        case RefKind::Param:
          if (!frame.params || slot >= frame.params->size()) fault("parameter '" + e.name + "' out of scope");
          return (*frame.params)[slot];
        case RefKind::Unbound: fault("unbound reference '" + e.name + "'");
      }
      break;
    }
    case Expr::Kind::Unary: {
      const Value v = eval(e.operands[0], inst, frame);
      if (e.unary == UnaryOp::Not) return box_bool(!as_bool(v));
      if (v.index() == 0) return box_int(wrap_neg(std::get<0>(v)));
      if (v.index() == 1) return box_real(-std::get<1>(v));
      fault("negation of a non-number");
    }
    case Expr::Kind::Binary: {
      if (e.binary == BinaryOp::And) {
        return box_bool(as_bool(eval(e.operands[0], inst, frame)) && as_bool(eval(e.operands[1], inst, frame)));
      }
      if (e.binary == BinaryOp::Or) {
        return box_bool(as_bool(eval(e.operands[0], inst, frame)) || as_bool(eval(e.operands[1], inst, frame)));
      }
      const Value l = eval(e.operands[0], inst, frame);
      const Value r = eval(e.operands[1], inst, frame);
      const bool ints = l.index() == 0 && r.index() == 0;
      switch (e.binary) {
        case BinaryOp::Add:
          if (ints) return box_int(wrap_add(std::get<0>(l), std::get<0>(r)));
          return box_real(as_real(l) + as_real(r));
        case BinaryOp::Sub:
          if (ints) return box_int(wrap_sub(std::get<0>(l), std::get<0>(r)));
          return box_real(as_real(l) - as_real(r));
        case BinaryOp::Mul:
          if (ints) return box_int(wrap_mul(std::get<0>(l), std::get<0>(r)));
          return box_real(as_real(l) * as_real(r));
        case BinaryOp::Div: return box_real(as_real(l) / as_real(r));
        case BinaryOp::Lt:
          if (ints) return box_bool(std::get<0>(l) < std::get<0>(r));
          return box_bool(as_real(l) < as_real(r));
        case BinaryOp::Le:
          if (ints) return box_bool(std::get<0>(l) <= std::get<0>(r));
          return box_bool(as_real(l) <= as_real(r));
        case BinaryOp::Gt:
          if (ints) return box_bool(std::get<0>(l) > std::get<0>(r));
          return box_bool(as_real(l) > as_real(r));
        case BinaryOp::Ge:
          if (ints) return box_bool(std::get<0>(l) >= std::get<0>(r));
          return box_bool(as_real(l) >= as_real(r));
        case BinaryOp::Eq:
        case BinaryOp::Ne: {
          bool eq = false;
          if (ints) {
            eq = std::get<0>(l) == std::get<0>(r);
          } else if (numeric(l) && numeric(r)) {
            eq = as_real(l) == as_real(r);
          } else if (l.index() == r.index()) {
            eq = l == r;
          } else {
            fault("comparison of incompatible values");
          }
          return box_bool(e.binary == BinaryOp::Eq ? eq : !eq);
        }
        default: break;
      }
      break;
    }
  }
  fault("malformed expression");
}

bool Simulation::eval_guard(const TransitionDef& tr, const InstanceState& inst,
                            const std::vector<Value>* params) const {
  if (!tr.guard) return true;
  Frame frame;
  frame.params = params;
  return as_bool(eval(*tr.guard, inst, frame));
}

void Simulation::assign(const Action& a, InstanceState& inst, Frame& frame, Value v) {
  const auto slot = static_cast<std::size_t>(a.slot);
  const ThingDef& thing = thing_of(inst);
  switch (a.ref) {
    case RefKind::Property:
      inst.propertyValues.at(slot) = coerce(std::move(v), thing.properties[slot].dtype);
      return;
    case RefKind::Local: {
      if (slot >= frame.locals.size()) fault("assignment to undeclared local");
      const auto t = dtype_of(frame.locals[slot]);
      frame.locals[slot] = coerce(std::move(v), t);
      return;
    }
    default: fault("invalid assignment target");
  }
}

void Simulation::exec(const std::vector<Action>& actions, InstanceState& inst, Frame& frame) {
  for (const auto& a : actions) exec_action(a, inst, frame);
}

void Simulation::exec_action(const Action& a, InstanceState& inst, Frame& frame) {
  const ThingDef& thing = thing_of(inst);
  switch (a.kind) {
    case Action::Kind::Assign: assign(a, inst, frame, eval(*a.value, inst, frame)); break;
    case Action::Kind::VarDecl: {
      Value v = coerce(eval(*a.value, inst, frame), a.dtype);
      const auto slot = static_cast<std::size_t>(a.slot);
      if (frame.locals.size() <= slot) frame.locals.resize(slot + 1);
      frame.locals[slot] = std::move(v);
      break;
    }
    case Action::Kind::Print: emit(inst, rt::TraceKind::Print, format_print(eval(*a.value, inst, frame))); break;
    case Action::Kind::Send: {
      const auto* msg = thing.find_message(a.message.name);
      if (!msg || msg->params.size() != a.args.size()) fault("send of malformed message");
      std::vector<Value> args;
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        args.push_back(coerce(eval(a.args[i], inst, frame), msg->params[i].dtype));
      }
      send(inst, a.target.name, a.message.name, std::move(args));
      break;
    }
    case Action::Kind::If:
      if (as_bool(eval(*a.value, inst, frame))) {
        exec(a.thenActions, inst, frame);
      } else {
        exec(a.elseActions, inst, frame);
      }
      break;
    case Action::Kind::DaTrain:
      inst.analytics.at(static_cast<std::size_t>(thing.analytics_index(a.target.name))).train(emitter(inst));
      break;
    case Action::Kind::DaSave:
      inst.analytics.at(static_cast<std::size_t>(thing.analytics_index(a.target.name))).save(emitter(inst));
      break;
    case Action::Kind::DaPredict: {
      std::vector<double> features;
      for (const auto& e : a.args) features.push_back(as_real(eval(e, inst, frame)));
      auto& slot = inst.analytics.at(static_cast<std::size_t>(thing.analytics_index(a.target.name)));
      const double y = slot.predict(features, emitter(inst));
      assign(a, inst, frame, box_real(y));
      break;
    }
    case Action::Kind::DaObserve: {
      std::vector<double> features;
      for (const auto& e : a.args) features.push_back(as_real(eval(e, inst, frame)));
      const double label = as_real(eval(*a.value, inst, frame));
      inst.analytics.at(static_cast<std::size_t>(thing.analytics_index(a.target.name)))
          .observe(features, label, emitter(inst));
      break;
    }
  }
}

void Simulation::send(const InstanceState& from, const std::string& port, const std::string& message,
                      std::vector<Value> args) {
  emit(from, rt::TraceKind::Send, rt::format_message(port, '!', message, args));
  int src = -1;
  for (std::size_t i = 0; i < state_.instances.size(); ++i) {
    if (&state_.instances[i] == &from) src = static_cast<int>(i);
  }
  for (const auto& r : routes_) {
    if (r.from == src && r.fromPort == port) {
      state_.instances[static_cast<std::size_t>(r.to)].pending.push_back(rt::Event{r.toPort, message, args});
    }
  }
}

void Simulation::enter(InstanceState& inst, int stateIndex) {
  const auto& st = thing_of(inst).statechart.states[static_cast<std::size_t>(stateIndex)];
  inst.currentState = stateIndex;
  inst.stateEntryTick = state_.tick;
  emit(inst, rt::TraceKind::StateEnter, st.name);
  Frame frame;
  exec(st.entryActions, inst, frame);
}

void Simulation::fire(InstanceState& inst, const TransitionDef& tr, const std::vector<Value>* params) {
  const ThingDef& thing = thing_of(inst);
  {
    Frame frame;
    exec(thing.statechart.states[static_cast<std::size_t>(inst.currentState)].exitActions, inst, frame);
  }
  {
    Frame frame;
    frame.params = params;
    exec(tr.actions, inst, frame);
  }
  enter(inst, thing.state_index(tr.target.name));
}

Trace Simulation::step() {
  Trace events;
  out_ = &events;

  if (state_.tick == 0) {
    for (auto& inst : state_.instances) enter(inst, inst.currentState);
  }

  for (auto& inst : state_.instances) {
    const auto& st = thing_of(inst).statechart.states[static_cast<std::size_t>(inst.currentState)];
    for (const auto& tr : st.transitions) {
      if (tr.trigger.kind != Trigger::Kind::After) continue;
      if (state_.tick - inst.stateEntryTick < tr.trigger.ticks) continue;
      if (!eval_guard(tr, inst, nullptr)) continue;
      fire(inst, tr, nullptr);
      break;
    }
  }

  for (auto& inst : state_.instances) {
    std::deque<rt::Event> batch;
    batch.swap(inst.mailbox);
    while (!batch.empty()) {
      const rt::Event ev = std::move(batch.front());
      batch.pop_front();
      const auto& st = thing_of(inst).statechart.states[static_cast<std::size_t>(inst.currentState)];
      for (const auto& tr : st.transitions) {
        if (tr.trigger.kind != Trigger::Kind::Message || tr.trigger.port.name != ev.port ||
            tr.trigger.message.name != ev.message) {
          continue;
        }
        if (!eval_guard(tr, inst, &ev.args)) continue;
        emit(inst, rt::TraceKind::Receive, rt::format_message(ev.port, '?', ev.message, ev.args));
        fire(inst, tr, &ev.args);
        break;
      }
    }
  }

  for (auto& inst : state_.instances) {
    for (auto& ev : inst.pending) inst.mailbox.push_back(std::move(ev));
    inst.pending.clear();
  }
  ++state_.tick;
  out_ = nullptr;
  return events;
}

bool Simulation::quiescent() const {
  for (const auto& inst : state_.instances) {
    if (!inst.mailbox.empty() || !inst.pending.empty()) return false;
    const auto& st = thing_of(inst).statechart.states[static_cast<std::size_t>(inst.currentState)];
    for (const auto& tr : st.transitions) {
      if (tr.trigger.kind == Trigger::Kind::After && eval_guard(tr, inst, nullptr)) return false;
    }
  }
  return true;
}

Trace run(const ResolvedModel& model, std::string_view configName, Int maxTicks, const SimOptions& options) {
  Simulation sim(model, configName, options);
  Trace trace;
  do {
    auto events = sim.step();
    trace.insert(trace.end(), std::make_move_iterator(events.begin()), std::make_move_iterator(events.end()));
  } while (sim.state().tick < maxTicks && !sim.quiescent());
  return trace;
}

}  // namespace mlq::sim
