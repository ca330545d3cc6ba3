#include "mlq/resolve.hpp"

#include <map>
#include <set>

namespace mlq {

namespace {

class Binder {
 public:
  Binder(ResolvedModel& out, std::vector<ResolveError>& errors) : out_(out), errors_(errors) {}

  void run() {
    Model& m = out_.model;
    check_unique(m.things, "thing");
    check_unique(m.configurations, "configuration");
    for (auto& t : m.things) bind_thing(t);
    for (auto& c : m.configurations) bind_configuration(c);
  }

 private:
  // Locals visible in nested blocks; each block maps names to slots.
  struct Frame {
    const MessageDef* message = nullptr;
    std::vector<std::map<std::string, int>> blocks;
    int nextSlot = 0;

    int find_local(const std::string& n) const {
      for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
        if (auto f = it->find(n); f != it->end()) return f->second;
      }
      return -1;
    }
    int find_param(const std::string& n) const {
      if (!message) return -1;
      for (std::size_t i = 0; i < message->params.size(); ++i) {
        if (message->params[i].name == n) return static_cast<int>(i);
      }
      return -1;
    }
  };

  void bound(SourceLoc loc, const std::string& name, const char* category, int index) {
    out_.bindings.push_back({loc, name, category, index});
  }

  void unresolved(SourceLoc loc, const std::string& name, const std::string& category, const std::string& msg) {
    errors_.push_back({ResolveError::Kind::UnresolvedReference, loc, name, category, msg});
  }

  void duplicate(SourceLoc loc, const std::string& name, const std::string& category) {
    errors_.push_back({ResolveError::Kind::DuplicateName, loc, name, category,
                       "duplicate " + category + " name '" + name + "'"});
  }

  template <typename T>
  void check_unique(const std::vector<T>& xs, const std::string& category) {
    std::set<std::string> seen;
    for (const auto& x : xs) {
      if (!seen.insert(x.name).second) duplicate(x.loc, x.name, category);
    }
  }

  void bind_message_names(const ThingDef& t, const std::vector<NameRef>& refs) {
    for (const auto& r : refs) {
      const int idx = index_of(t.messages, r.name);
      if (idx < 0) {
        unresolved(r.loc, r.name, "message", "unresolved message '" + r.name + "' in thing '" + t.name + "'");
      } else {
        bound(r.loc, r.name, "message", idx);
      }
    }
  }

  template <typename T>
  static int index_of(const std::vector<T>& xs, const std::string& n) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i].name == n) return static_cast<int>(i);
    }
    return -1;
  }

  void bind_thing(ThingDef& t) {
    thing_ = &t;
    check_unique(t.properties, "property");
    check_unique(t.messages, "message");
    check_unique(t.ports, "port");
    check_unique(t.analytics, "data_analytics");
    check_unique(t.statechart.states, "state");
    for (const auto& m : t.messages) check_unique(m.params, "parameter");
    for (const auto& p : t.ports) {
      bind_message_names(t, p.receives);
      bind_message_names(t, p.sends);
    }
    for (const auto& da : t.analytics) {
      std::set<std::string> seen;
      for (const auto& f : da.features) {
        if (!seen.insert(f.name).second) duplicate(f.loc, f.name, "feature");
      }
      if (seen.count(da.label.name)) {
        errors_.push_back({ResolveError::Kind::DuplicateName, da.label.loc, da.label.name, "feature",
                           "label '" + da.label.name + "' is also listed as a feature"});
      }
    }

    const auto& init = t.statechart.initialState;
    if (const int idx = t.state_index(init.name); idx < 0) {
      unresolved(init.loc, init.name, "state", "unresolved initial state '" + init.name + "'");
    } else {
      bound(init.loc, init.name, "state", idx);
    }

    for (auto& s : t.statechart.states) {
      bind_block(s.entryActions, nullptr);
      bind_block(s.exitActions, nullptr);
      for (auto& tr : s.transitions) bind_transition(tr);
    }
  }

  void bind_transition(TransitionDef& tr) {
    const ThingDef& t = *thing_;
    if (const int idx = t.state_index(tr.target.name); idx < 0) {
      unresolved(tr.target.loc, tr.target.name, "state", "unresolved target state '" + tr.target.name + "'");
    } else {
      bound(tr.target.loc, tr.target.name, "state", idx);
    }

    const MessageDef* msg = nullptr;
    if (tr.trigger.kind == Trigger::Kind::Message) {
      const auto& pr = tr.trigger.port;
      const auto& mr = tr.trigger.message;
      const int pidx = index_of(t.ports, pr.name);
      const int midx = index_of(t.messages, mr.name);
      if (pidx < 0) unresolved(pr.loc, pr.name, "port", "unresolved port '" + pr.name + "'");
      else bound(pr.loc, pr.name, "port", pidx);
      if (midx < 0) {
        unresolved(mr.loc, mr.name, "message", "unresolved message '" + mr.name + "'");
      } else if (pidx >= 0 && !t.ports[static_cast<std::size_t>(pidx)].receives_message(mr.name)) {
        unresolved(mr.loc, mr.name, "message",
                   "port '" + pr.name + "' does not receive message '" + mr.name + "'");
      } else {
        bound(mr.loc, mr.name, "message", midx);
        msg = &t.messages[static_cast<std::size_t>(midx)];
      }
    }

    Frame frame;
    frame.message = msg;
    frame.blocks.emplace_back();
    if (tr.guard) bind_expr(*tr.guard, frame);
    bind_actions(tr.actions, frame);
  }

  void bind_block(std::vector<Action>& actions, const MessageDef* msg) {
    Frame frame;
    frame.message = msg;
    frame.blocks.emplace_back();
    bind_actions(actions, frame);
  }

  void bind_actions(std::vector<Action>& actions, Frame& frame) {
    for (auto& a : actions) bind_action(a, frame);
  }

  // Assignment targets resolve to locals, then params, then properties.
  void bind_target(Action& a, const NameRef& name, Frame& frame) {
    if (const int s = frame.find_local(name.name); s >= 0) {
      a.ref = RefKind::Local;
      a.slot = s;
      bound(name.loc, name.name, "local", s);
    } else if (const int p = frame.find_param(name.name); p >= 0) {
      a.ref = RefKind::Param;
      a.slot = p;
      bound(name.loc, name.name, "param", p);
    } else if (const int q = thing_->property_index(name.name); q >= 0) {
      a.ref = RefKind::Property;
      a.slot = q;
      bound(name.loc, name.name, "property", q);
    } else {
      unresolved(name.loc, name.name, "variable", "unresolved variable '" + name.name + "'");
    }
  }

  void bind_analytics(const NameRef& name) {
    if (const int idx = thing_->analytics_index(name.name); idx < 0) {
      unresolved(name.loc, name.name, "data_analytics", "unresolved data_analytics block '" + name.name + "'");
    } else {
      bound(name.loc, name.name, "data_analytics", idx);
    }
  }

  void bind_action(Action& a, Frame& frame) {
    const ThingDef& t = *thing_;
    for (auto& e : a.args) bind_expr(e, frame);
    if (a.kind != Action::Kind::VarDecl && a.value) bind_expr(*a.value, frame);

    switch (a.kind) {
      case Action::Kind::Assign: bind_target(a, a.target, frame); break;
      case Action::Kind::VarDecl: {
        bind_expr(*a.value, frame);
        if (frame.find_local(a.target.name) >= 0 || frame.find_param(a.target.name) >= 0) {
          duplicate(a.target.loc, a.target.name, "local variable");
        }
        const int slot = frame.nextSlot++;
        frame.blocks.back()[a.target.name] = slot;
        a.ref = RefKind::Local;
        a.slot = slot;
        bound(a.target.loc, a.target.name, "local", slot);
        break;
      }
      case Action::Kind::Send: {
        const int pidx = index_of(t.ports, a.target.name);
        const int midx = index_of(t.messages, a.message.name);
        if (pidx < 0) unresolved(a.target.loc, a.target.name, "port", "unresolved port '" + a.target.name + "'");
        else bound(a.target.loc, a.target.name, "port", pidx);
        if (midx < 0) {
          unresolved(a.message.loc, a.message.name, "message", "unresolved message '" + a.message.name + "'");
        } else if (pidx >= 0 && !t.ports[static_cast<std::size_t>(pidx)].sends_message(a.message.name)) {
          unresolved(a.message.loc, a.message.name, "message",
                     "port '" + a.target.name + "' does not send message '" + a.message.name + "'");
        } else {
          bound(a.message.loc, a.message.name, "message", midx);
        }
        break;
      }
      case Action::Kind::If: {
        frame.blocks.emplace_back();
        bind_actions(a.thenActions, frame);
        frame.blocks.back().clear();
        bind_actions(a.elseActions, frame);
        frame.blocks.pop_back();
        break;
      }
      case Action::Kind::DaTrain:
      case Action::Kind::DaSave:
      case Action::Kind::DaObserve: bind_analytics(a.target); break;
      case Action::Kind::DaPredict:
        bind_analytics(a.target);
        bind_target(a, a.message, frame);
        break;
      case Action::Kind::Print: break;
    }
  }

  void bind_expr(Expr& e, Frame& frame) {
    for (auto& o : e.operands) bind_expr(o, frame);
    if (e.kind != Expr::Kind::Ref) return;
    if (const int s = frame.find_local(e.name); s >= 0) {
      e.ref = RefKind::Local;
      e.slot = s;
      bound(e.loc, e.name, "local", s);
    } else if (const int p = frame.find_param(e.name); p >= 0) {
      e.ref = RefKind::Param;
      e.slot = p;
      bound(e.loc, e.name, "param", p);
    } else if (const int q = thing_->property_index(e.name); q >= 0) {
      e.ref = RefKind::Property;
      e.slot = q;
      bound(e.loc, e.name, "property", q);
    } else {
      e.ref = RefKind::Unbound;
      e.slot = -1;
      unresolved(e.loc, e.name, "variable", "unresolved variable '" + e.name + "'");
    }
  }

  void bind_configuration(const ConfigurationDef& c) {
    const Model& m = out_.model;
    check_unique(c.instances, "instance");
    for (const auto& i : c.instances) {
      if (const int idx = index_of(m.things, i.thing.name); idx < 0) {
        unresolved(i.thing.loc, i.thing.name, "thing", "unresolved thing '" + i.thing.name + "'");
      } else {
        bound(i.thing.loc, i.thing.name, "thing", idx);
      }
    }
    for (const auto& k : c.connectors) {
      for (const auto* ep : {&k.a, &k.b}) {
        const int iidx = index_of(c.instances, ep->instance.name);
        if (iidx < 0) {
          unresolved(ep->instance.loc, ep->instance.name, "instance",
                     "unresolved instance '" + ep->instance.name + "'");
          continue;
        }
        bound(ep->instance.loc, ep->instance.name, "instance", iidx);
        const ThingDef* thing = m.find_thing(c.instances[static_cast<std::size_t>(iidx)].thing.name);
        if (!thing) continue;
        if (const int pidx = index_of(thing->ports, ep->port.name); pidx < 0) {
          unresolved(ep->port.loc, ep->port.name, "port",
                     "thing '" + thing->name + "' has no port '" + ep->port.name + "'");
        } else {
          bound(ep->port.loc, ep->port.name, "port", pidx);
        }
      }
    }
  }

  ResolvedModel& out_;
  std::vector<ResolveError>& errors_;
  const ThingDef* thing_ = nullptr;
};

}  // namespace

ResolvedModel bind_best_effort(const Model& model, std::vector<ResolveError>& errors) {
  ResolvedModel out{model, {}};
  Binder(out, errors).run();
  return out;
}

ResolveResult resolve_references(const Model& model) {
  ResolveResult result;
  auto bound = bind_best_effort(model, result.errors);
  if (result.errors.empty()) result.resolved = std::move(bound);
  return result;
}

}  // namespace mlq
