#pragma once

// Runtime pieces shared by the simulator and by generated projects: the
// canonical trace format, data-analytics slots and, for generated code, the
// tick loop that drives compiled thing classes.

#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mlq/ml_core.hpp"
#include "mlq/value.hpp"

namespace mlq::rt {

enum class TraceKind { StateEnter, Send, Receive, Print, DaTrain, DaPredict, DaObserve, DaSave };

inline std::string_view to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::StateEnter: return "STATE_ENTER";
    case TraceKind::Send: return "SEND";
    case TraceKind::Receive: return "RECEIVE";
    case TraceKind::Print: return "PRINT";
    case TraceKind::DaTrain: return "DA_TRAIN";
    case TraceKind::DaPredict: return "DA_PREDICT";
    case TraceKind::DaObserve: return "DA_OBSERVE";
    case TraceKind::DaSave: return "DA_SAVE";
  }
  return "?";
}

struct TraceEvent {
  Int tick = 0;
  std::string instance;
  TraceKind kind = TraceKind::Print;
  std::string detail;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

/// `tick<TAB>instance<TAB>kind<TAB>detail` without the trailing newline.
inline std::string format_trace_line(const TraceEvent& e) {
  std::string out = std::to_string(e.tick);
  out += '\t';
  out += e.instance;
  out += '\t';
  out += to_string(e.kind);
  out += '\t';
  out += e.detail;
  return out;
}

inline std::string format_trace(std::span<const TraceEvent> events) {
  std::string out;
  for (const auto& e : events) {
    out += format_trace_line(e);
    out += '\n';
  }
  return out;
}

struct Event {
  std::string port;
  std::string message;
  std::vector<Value> args;
};

/// `port!msg(a, b)` for sends, `port?msg(a, b)` for receives.
inline std::string format_message(std::string_view port, char sep, std::string_view message,
                                  std::span<const Value> args) {
  std::string out(port);
  out += sep;
  out += message;
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += format_value(args[i]);
  }
  out += ')';
  return out;
}

inline std::string format_reals(std::span<const double> xs) {
  std::string out = "(";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += format_real(xs[i]);
  }
  return out + ")";
}

using Emit = std::function<void(TraceKind, std::string)>;

/// Per-instance state of one data-analytics block: its observation buffer and
/// the most recently trained model.
class AnalyticsSlot {
 public:
  AnalyticsSlot(std::string name, ml::TrainSpec spec, std::filesystem::path datasetPath, std::string modelPath,
                std::filesystem::path modelFile)
      : name_(std::move(name)),
        spec_(std::move(spec)),
        datasetPath_(std::move(datasetPath)),
        modelPath_(std::move(modelPath)),
        modelFile_(std::move(modelFile)) {
    buffer_.daName = name_;
    buffer_.featureCount = spec_.features.size();
  }

  const std::string& name() const { return name_; }
  const ml::ObservationBuffer& buffer() const { return buffer_; }
  const std::optional<ml::TrainedModel>& model() const { return model_; }

  /// Trains on the dataset followed by every observed sample.
  void train(const Emit& emit) {
    auto columns = spec_.features;
    columns.push_back(spec_.label);
    const auto dataset = ml::load_dataset(datasetPath_, columns);
    model_ = ml::train(spec_, dataset, buffer_);
    emit(TraceKind::DaTrain, name_ + " rows=" + std::to_string(model_->trainedOnRows));
  }

  /// Trains first when no model exists yet.
  double predict(std::span<const double> features, const Emit& emit) {
    if (!model_) train(emit);
    const double y = ml::predict(*model_, features);
    emit(TraceKind::DaPredict, name_ + format_reals(features) + " = " + format_real(y));
    return y;
  }

  void observe(std::span<const double> features, double label, const Emit& emit) {
    ml::observe(buffer_, features, label);
    emit(TraceKind::DaObserve, name_ + format_reals(features) + " label=" + format_real(label));
  }

  void save(const Emit& emit) {
    if (!model_) train(emit);
    ml::save_model(*model_, modelFile_);
    emit(TraceKind::DaSave, name_ + " -> " + modelPath_);
  }

 private:
  std::string name_;
  ml::TrainSpec spec_;
  std::filesystem::path datasetPath_;
  std::string modelPath_;
  std::filesystem::path modelFile_;
  ml::ObservationBuffer buffer_;
  std::optional<ml::TrainedModel> model_;
};

class Runtime;

/// Base class of every generated thing.
class Instance {
 public:
  explicit Instance(std::string name) : name_(std::move(name)) {}
  virtual ~Instance() = default;
  Instance(const Instance&) = delete;
  Instance& operator=(const Instance&) = delete;

  const std::string& name() const { return name_; }

  // Tick 0: STATE_ENTER of the initial state followed by its entry actions.
  virtual void start(Runtime& rt) = 0;
  // Fires the first eligible timed transition whose guard holds.
  virtual bool fire_after(Runtime& rt) = 0;
  // Run-to-completion handling of one event; false when the event is dropped.
  virtual bool handle(Runtime& rt, const Event& ev) = 0;
  // True while some timed transition of the current state has a true guard.
  virtual bool may_fire_after() const = 0;

 protected:
  std::string name_;
};

/// Tick loop for generated programs. Mirrors the simulator's step semantics.
class Runtime {
 public:
  explicit Runtime(std::ostream& trace) : trace_(trace) {}

  Int tick() const { return tick_; }

  int add(Instance& inst) {
    slots_.push_back(Slot{&inst, {}, {}});
    return static_cast<int>(slots_.size() - 1);
  }

  /// Binds two instance ports; messages sent on either side reach the other.
  void connect(int a, std::string portA, int b, std::string portB) {
    routes_.push_back(Route{a, portA, b, portB});
    routes_.push_back(Route{b, std::move(portB), a, std::move(portA)});
  }

  void emit(const Instance& inst, TraceKind kind, std::string detail) {
    trace_ << format_trace_line(TraceEvent{tick_, inst.name(), kind, std::move(detail)}) << '\n';
  }

  Emit emitter(const Instance& inst) {
    return [this, &inst](TraceKind kind, std::string detail) { emit(inst, kind, std::move(detail)); };
  }

  void print(const Instance& inst, const Value& v) { emit(inst, TraceKind::Print, format_print(v)); }

  void send(const Instance& from, const std::string& port, const std::string& message, std::vector<Value> args) {
    emit(from, TraceKind::Send, format_message(port, '!', message, args));
    const int src = index_of(from);
    for (const auto& r : routes_) {
      if (r.from == src && r.fromPort == port) slots_[static_cast<std::size_t>(r.to)].pending.push_back(Event{r.toPort, message, args});
    }
  }

  void receive(const Instance& inst, const Event& ev) {
    emit(inst, TraceKind::Receive, format_message(ev.port, '?', ev.message, ev.args));
  }

  void step() {
    if (tick_ == 0) {
      for (auto& s : slots_) s.inst->start(*this);
    }
    for (auto& s : slots_) s.inst->fire_after(*this);
    for (auto& s : slots_) {
      std::deque<Event> batch;
      batch.swap(s.mailbox);
      while (!batch.empty()) {
        const Event ev = std::move(batch.front());
        batch.pop_front();
        s.inst->handle(*this, ev);
      }
    }
    for (auto& s : slots_) {
      for (auto& ev : s.pending) s.mailbox.push_back(std::move(ev));
      s.pending.clear();
    }
    ++tick_;
  }

  bool quiescent() const {
    for (const auto& s : slots_) {
      if (!s.mailbox.empty() || !s.pending.empty() || s.inst->may_fire_after()) return false;
    }
    return true;
  }

  void run(Int maxTicks) {
    do {
      step();
    } while (tick_ < maxTicks && !quiescent());
    trace_.flush();
  }

 private:
  struct Slot {
    Instance* inst;
    std::deque<Event> mailbox;
    std::vector<Event> pending;
  };
  struct Route {
    int from;
    std::string fromPort;
    int to;
    std::string toPort;
  };

  int index_of(const Instance& inst) const {
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      if (slots_[i].inst == &inst) return static_cast<int>(i);
    }
    return -1;
  }

  std::ostream& trace_;
  Int tick_ = 0;
  std::vector<Slot> slots_;
  std::vector<Route> routes_;
};

}  // namespace mlq::rt
