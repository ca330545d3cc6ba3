// Reference backend: a standalone C++20 project with one class per thing, the
// shared runtime sources embedded verbatim and a build.sh entrypoint.

#include <charconv>
#include <cstdio>
#include <limits>
#include <set>
#include <string>

#include "mlq/codegen.hpp"
#include "mlq/embedded_runtime.hpp"
#include "mlq/validator.hpp"

namespace mlq::codegen {

namespace {

class Writer {
 public:
  void line(std::string_view s = {}) {
    if (!s.empty()) out_.append(static_cast<std::size_t>(indent_) * 2, ' ');
    out_ += s;
    out_ += '\n';
  }
  void open(std::string_view s) {
    line(s);
    ++indent_;
  }
  void reopen(std::string_view s) {
    --indent_;
    line(s);
    ++indent_;
  }
  void dedent() { --indent_; }
  void close(std::string_view s = "}") {
    --indent_;
    line(s);
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
  int indent_ = 0;
};

std::string cpp_type(DType t) {
  switch (t) {
    case DType::Int: return "mlq::Int";
    case DType::Real: return "double";
    case DType::Bool: return "bool";
    case DType::String: return "std::string";
  }
  return "void";
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20 || c == 0x7f) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\%03o", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out + "\"";
}

std::string int_literal(Int v) {
  if (v == std::numeric_limits<Int>::min()) return "(mlq::Int(-9223372036854775807) - 1)";
  return "mlq::Int(" + std::to_string(v) + ")";
}

std::string real_literal(double v) {
  if (v != v) return "std::numeric_limits<double>::quiet_NaN()";
  if (v == std::numeric_limits<double>::infinity()) return "std::numeric_limits<double>::infinity()";
  if (v == -std::numeric_limits<double>::infinity()) return "(-std::numeric_limits<double>::infinity())";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  if (s[0] == '-') return "(" + s + ")";
  return s;
}

std::string literal(const Value& v) {
  switch (v.index()) {
    case 0: return int_literal(std::get<0>(v));
    case 1: return real_literal(std::get<1>(v));
    case 2: return std::get<2>(v) ? "true" : "false";
    default: return "std::string(" + quote(std::get<3>(v)) + ")";
  }
}

std::string boxed(DType t, const std::string& e) {
  switch (t) {
    case DType::Int: return "mlq::box_int(" + e + ")";
    case DType::Real: return "mlq::box_real(" + e + ")";
    case DType::Bool: return "mlq::box_bool(" + e + ")";
    case DType::String: return "mlq::box_str(" + e + ")";
  }
  return e;
}

std::string widened(DType from, DType to, const std::string& e) {
  if (from == DType::Int && to == DType::Real) return "mlq::to_real(" + e + ")";
  return e;
}

std::string class_name(std::string_view thing) { return "Thing_" + std::string(thing); }
std::string state_name(std::string_view s) { return "State::s_" + std::string(s); }

std::string safe_file_name(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    out += ok ? c : '_';
  }
  return out.empty() ? "model" : out;
}

std::string bundle_data_path(std::string_view datasetPath) {
  return "data/" + std::filesystem::path(std::string(datasetPath)).filename().string();
}

class ThingEmitter {
 public:
  explicit ThingEmitter(const ThingDef& thing) : thing_(thing) {}

  std::string header() const;
  std::string source() const;

 private:
  std::string expr(const Expr& e, const TypeScope& scope) const;
  std::string target_name(RefKind ref, const std::string& name) const;
  DType target_type(const Action& a, const TypeScope& scope) const;
  void block(Writer& w, const std::vector<Action>& actions, TypeScope scope) const;
  void action(Writer& w, const Action& a, TypeScope& scope) const;
  std::string guard(const TransitionDef& tr, const MessageDef* msg) const;
  void fire(Writer& w, const TransitionDef& tr, const MessageDef* msg) const;

  TypeScope scope_for(const MessageDef* msg) const { return TypeScope{&thing_, msg, {}}; }

  const ThingDef& thing_;
};

std::string ThingEmitter::target_name(RefKind ref, const std::string& name) const {
  switch (ref) {
    case RefKind::Property: return "p_" + name;
    case RefKind::Local: return "l_" + name;
    case RefKind::Param: return "a_" + name;
    case RefKind::Unbound: break;
  }
  throw std::logic_error("unbound name '" + name + "' reached code generation");
}

std::string ThingEmitter::expr(const Expr& e, const TypeScope& scope) const {
  switch (e.kind) {
    case Expr::Kind::Literal: return literal(e.literal);
    case Expr::Kind::Ref: return target_name(e.ref, e.name);
    case Expr::Kind::Unary: {
      const std::string inner = expr(e.operands[0], scope);
      if (e.unary == UnaryOp::Not) return "(!" + inner + ")";
      if (type_of(e.operands[0], scope) == DType::Int) return "mlq::wrap_neg(" + inner + ")";
      return "(-" + inner + ")";
    }
    case Expr::Kind::Binary: {
      const std::string l = expr(e.operands[0], scope);
      const std::string r = expr(e.operands[1], scope);
      if (e.binary == BinaryOp::And) return "(" + l + " && " + r + ")";
      if (e.binary == BinaryOp::Or) return "(" + l + " || " + r + ")";
      const DType lt = type_of(e.operands[0], scope);
      const DType rt = type_of(e.operands[1], scope);
      const bool ints = lt == DType::Int && rt == DType::Int;
      const bool nums = is_numeric(lt) && is_numeric(rt);
      const std::string rl = "mlq::to_real(" + l + ")";
      const std::string rr = "mlq::to_real(" + r + ")";
      auto arith = [&](const char* wrap, const char* op) {
        if (ints) return std::string("mlq::") + wrap + "(" + l + ", " + r + ")";
        return "(" + rl + " " + op + " " + rr + ")";
      };
      auto cmp = [&](const char* op) {
        if (ints || !nums) return "(" + l + " " + op + " " + r + ")";
        return "(" + rl + " " + op + " " + rr + ")";
      };
      switch (e.binary) {
        case BinaryOp::Add: return arith("wrap_add", "+");
        case BinaryOp::Sub: return arith("wrap_sub", "-");
        case BinaryOp::Mul: return arith("wrap_mul", "*");
        case BinaryOp::Div: return "(" + rl + " / " + rr + ")";
        case BinaryOp::Lt: return cmp("<");
        case BinaryOp::Le: return cmp("<=");
        case BinaryOp::Gt: return cmp(">");
        case BinaryOp::Ge: return cmp(">=");
        case BinaryOp::Eq: return cmp("==");
        case BinaryOp::Ne: return cmp("!=");
        default: break;
      }
      break;
    }
  }
  throw std::logic_error("malformed expression");
}

DType ThingEmitter::target_type(const Action& a, const TypeScope& scope) const {
  const auto slot = static_cast<std::size_t>(a.slot);
  if (a.ref == RefKind::Property) return thing_.properties.at(slot).dtype;
  if (a.ref == RefKind::Local) return scope.locals.at(slot);
  throw std::logic_error("invalid assignment target '" + a.target.name + "'");
}

void ThingEmitter::block(Writer& w, const std::vector<Action>& actions, TypeScope scope) const {
  for (const auto& a : actions) action(w, a, scope);
}

void ThingEmitter::action(Writer& w, const Action& a, TypeScope& scope) const {
  switch (a.kind) {
    case Action::Kind::Assign: {
      const DType tt = target_type(a, scope);
      const std::string v = widened(type_of(*a.value, scope), tt, expr(*a.value, scope));
      w.line(target_name(a.ref, a.target.name) + " = " + v + ";");
      break;
    }
    case Action::Kind::VarDecl: {
      const std::string v = widened(type_of(*a.value, scope), a.dtype, expr(*a.value, scope));
      w.line("[[maybe_unused]] " + cpp_type(a.dtype) + " l_" + a.target.name + " = " + v + ";");
      const auto slot = static_cast<std::size_t>(a.slot);
      if (scope.locals.size() <= slot) scope.locals.resize(slot + 1, DType::Int);
      scope.locals[slot] = a.dtype;
      break;
    }
    case Action::Kind::Print:
      w.line("rt.print(*this, " + boxed(type_of(*a.value, scope), expr(*a.value, scope)) + ");");
      break;
    case Action::Kind::Send: {
      const auto* msg = thing_.find_message(a.message.name);
      std::string args;
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        const DType pt = msg->params.at(i).dtype;
        if (i) args += ", ";
        args += boxed(pt, widened(type_of(a.args[i], scope), pt, expr(a.args[i], scope)));
      }
      w.line("rt.send(*this, " + quote(a.target.name) + ", " + quote(a.message.name) + ", {" + args + "});");
      break;
    }
    case Action::Kind::If:
      w.open("if (" + expr(*a.value, scope) + ") {");
      block(w, a.thenActions, scope);
      if (a.elseActions.empty()) {
        w.close();
      } else {
        w.reopen("} else {");
        block(w, a.elseActions, scope);
        w.close();
      }
      break;
    case Action::Kind::DaTrain: w.line("da_" + a.target.name + ".train(rt.emitter(*this));"); break;
    case Action::Kind::DaSave: w.line("da_" + a.target.name + ".save(rt.emitter(*this));"); break;
    case Action::Kind::DaPredict:
    case Action::Kind::DaObserve: {
      std::string features;
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) features += ", ";
        features += "mlq::to_real(" + expr(a.args[i], scope) + ")";
      }
      w.open("{");
      w.line("const std::vector<double> f{" + features + "};");
      if (a.kind == Action::Kind::DaPredict) {
        w.line(target_name(a.ref, a.message.name) + " = da_" + a.target.name + ".predict(f, rt.emitter(*this));");
      } else {
        w.line("const double label = mlq::to_real(" + expr(*a.value, scope) + ");");
        w.line("da_" + a.target.name + ".observe(f, label, rt.emitter(*this));");
      }
      w.close();
      break;
    }
  }
}

std::string ThingEmitter::guard(const TransitionDef& tr, const MessageDef* msg) const {
  if (!tr.guard) return "true";
  return expr(*tr.guard, scope_for(msg));
}

// Body of a firing transition: exit actions, transition actions, entry.
void ThingEmitter::fire(Writer& w, const TransitionDef& tr, const MessageDef* msg) const {
  w.line("exit_current(rt);");
  if (!tr.actions.empty()) {
    w.open("{");
    block(w, tr.actions, scope_for(msg));
    w.close();
  }
  w.line("enter(rt, " + state_name(tr.target.name) + ");");
  w.line("return true;");
}

std::string ThingEmitter::header() const {
  const std::string cls = class_name(thing_.name);
  Writer w;
  w.line("#pragma once");
  w.line();
  w.line("#include <filesystem>");
  w.line("#include <string>");
  w.line();
  w.line("#include \"mlq/runtime_support.hpp\"");
  w.line();
  w.open("class " + cls + " final : public mlq::rt::Instance {");
  w.reopen(" public:");
  w.line(cls + "(std::string name, const std::filesystem::path& root);");
  w.line();
  w.line("void start(mlq::rt::Runtime& rt) override;");
  w.line("bool fire_after(mlq::rt::Runtime& rt) override;");
  w.line("bool handle(mlq::rt::Runtime& rt, const mlq::rt::Event& ev) override;");
  w.line("bool may_fire_after() const override;");
  w.line();
  w.reopen(" private:");
  std::string states;
  for (const auto& s : thing_.statechart.states) {
    if (!states.empty()) states += ", ";
    states += "s_" + s.name;
  }
  w.line("enum class State { " + states + " };");
  w.line();
  w.line("void enter(mlq::rt::Runtime& rt, State next);");
  w.line("void exit_current(mlq::rt::Runtime& rt);");
  w.line();
  w.line("State state_ = " + state_name(thing_.statechart.initialState.name) + ";");
  w.line("mlq::Int entered_at_ = 0;");
  for (const auto& p : thing_.properties) {
    w.line(cpp_type(p.dtype) + " p_" + p.name + " = " + literal(p.initial ? *p.initial : zero_value(p.dtype)) + ";");
  }
  for (const auto& da : thing_.analytics) w.line("mlq::rt::AnalyticsSlot da_" + da.name + ";");
  w.close("};");
  return w.take();
}

std::string ThingEmitter::source() const {
  const std::string cls = class_name(thing_.name);
  const auto& states = thing_.statechart.states;
  Writer w;
  w.line("#include \"things/" + thing_.name + ".hpp\"");
  w.line();
  w.line("#include <limits>");
  w.line("#include <utility>");
  w.line("#include <vector>");
  w.line();

  std::string params = thing_.analytics.empty() ? "[[maybe_unused]] " : "";
  w.line(cls + "::" + cls + "(std::string name, " + params + "const std::filesystem::path& root)");
  w.line("    : mlq::rt::Instance(std::move(name))" + std::string(thing_.analytics.empty() ? " {}" : ""));
  for (std::size_t i = 0; i < thing_.analytics.size(); ++i) {
    const auto& da = thing_.analytics[i];
    std::string features;
    for (const auto& f : da.features) {
      if (!features.empty()) features += ", ";
      features += quote(f.name);
    }
    const bool knn = da.algorithm.kind == AlgorithmSpec::Kind::Knn;
    const std::string algo = std::string("mlq::ml::Algorithm{mlq::ml::AlgorithmKind::") +
                             (knn ? "KnnRegression" : "LinearRegression") + ", " +
                             std::to_string(knn ? da.algorithm.k : 0) + "}";
    w.line("    , da_" + da.name + "(" + quote(da.name) + ", mlq::ml::TrainSpec{{" + features + "}, " +
           quote(da.label.name) + ", " + algo + "},");
    w.line("          root / " + quote(bundle_data_path(da.datasetPath)) + ", " + quote(da.modelPath) + ", root / " +
           quote(da.modelPath) + ")" + (i + 1 == thing_.analytics.size() ? " {}" : ""));
  }
  w.line();

  w.line("void " + cls + "::start(mlq::rt::Runtime& rt) { enter(rt, " +
         state_name(thing_.statechart.initialState.name) + "); }");
  w.line();

  w.open("void " + cls + "::enter(mlq::rt::Runtime& rt, State next) {");
  w.line("state_ = next;");
  w.line("entered_at_ = rt.tick();");
  w.open("switch (next) {");
  for (const auto& s : states) {
    w.open("case " + state_name(s.name) + ": {");
    w.line("rt.emit(*this, mlq::rt::TraceKind::StateEnter, " + quote(s.name) + ");");
    block(w, s.entryActions, scope_for(nullptr));
    w.line("break;");
    w.close();
  }
  w.close();
  w.close();
  w.line();

  w.open("void " + cls + "::exit_current([[maybe_unused]] mlq::rt::Runtime& rt) {");
  w.open("switch (state_) {");
  for (const auto& s : states) {
    w.open("case " + state_name(s.name) + ": {");
    block(w, s.exitActions, scope_for(nullptr));
    w.line("break;");
    w.close();
  }
  w.close();
  w.close();
  w.line();

  w.open("bool " + cls + "::fire_after([[maybe_unused]] mlq::rt::Runtime& rt) {");
  w.open("switch (state_) {");
  for (const auto& s : states) {
    w.open("case " + state_name(s.name) + ":");
    for (const auto& tr : s.transitions) {
      if (tr.trigger.kind != Trigger::Kind::After) continue;
      std::string cond = "rt.tick() - entered_at_ >= " + int_literal(tr.trigger.ticks);
      if (tr.guard) cond += " && " + guard(tr, nullptr);
      w.open("if (" + cond + ") {");
      fire(w, tr, nullptr);
      w.close();
    }
    w.line("return false;");
    w.dedent();
  }
  w.close();
  w.line("return false;");
  w.close();
  w.line();

  w.open("bool " + cls + "::handle([[maybe_unused]] mlq::rt::Runtime& rt, [[maybe_unused]] const mlq::rt::Event& ev) {");
  w.open("switch (state_) {");
  for (const auto& s : states) {
    w.open("case " + state_name(s.name) + ":");
    for (const auto& tr : s.transitions) {
      if (tr.trigger.kind != Trigger::Kind::Message) continue;
      const auto* msg = thing_.find_message(tr.trigger.message.name);
      w.open("if (ev.port == " + quote(tr.trigger.port.name) + " && ev.message == " + quote(tr.trigger.message.name) +
             ") {");
      for (std::size_t i = 0; i < msg->params.size(); ++i) {
        const auto& p = msg->params[i];
        w.line("[[maybe_unused]] const auto& a_" + p.name + " = std::get<" + cpp_type(p.dtype) + ">(ev.args.at(" +
               std::to_string(i) + "));");
      }
      w.open("if (" + guard(tr, msg) + ") {");
      w.line("rt.receive(*this, ev);");
      fire(w, tr, msg);
      w.close();
      w.close();
    }
    w.line("return false;");
    w.dedent();
  }
  w.close();
  w.line("return false;");
  w.close();
  w.line();

  w.open("bool " + cls + "::may_fire_after() const {");
  w.open("switch (state_) {");
  for (const auto& s : states) {
    w.open("case " + state_name(s.name) + ":");
    for (const auto& tr : s.transitions) {
      if (tr.trigger.kind != Trigger::Kind::After) continue;
      w.line("if (" + guard(tr, nullptr) + ") return true;");
    }
    w.line("return false;");
    w.dedent();
  }
  w.close();
  w.line("return false;");
  w.close();
  return w.take();
}

std::string main_source(const Model& model, const ConfigurationDef& config) {
  Writer w;
  w.line("#include <cstdlib>");
  w.line("#include <exception>");
  w.line("#include <filesystem>");
  w.line("#include <fstream>");
  w.line("#include <iostream>");
  w.line("#include <string>");
  w.line();
  w.line("#include \"mlq/runtime_support.hpp\"");
  std::set<std::string> used;
  for (const auto& inst : config.instances) used.insert(inst.thing.name);
  for (const auto& t : model.things) {
    if (used.count(t.name)) w.line("#include \"things/" + t.name + ".hpp\"");
  }
  w.line();
  w.open("namespace {");
  w.line();
  w.open("int usage(const char* argv0) {");
  w.line("std::cerr << \"usage: \" << argv0 << \" [--ticks N] [--trace FILE] [--root DIR]\\n\";");
  w.line("return 2;");
  w.close();
  w.line();
  w.close("}  // namespace");
  w.line();
  w.open("int main(int argc, char** argv) {");
  w.line("long long ticks = 100;");
  w.line("std::string tracePath;");
  w.line("std::filesystem::path root = \".\";");
  w.open("for (int i = 1; i < argc; ++i) {");
  w.line("const std::string arg = argv[i];");
  w.open("if (arg == \"--ticks\" && i + 1 < argc) {");
  w.open("try {");
  w.line("ticks = std::stoll(argv[++i]);");
  w.reopen("} catch (const std::exception&) {");
  w.line("return usage(argv[0]);");
  w.close();
  w.reopen("} else if (arg == \"--trace\" && i + 1 < argc) {");
  w.line("tracePath = argv[++i];");
  w.reopen("} else if (arg == \"--root\" && i + 1 < argc) {");
  w.line("root = argv[++i];");
  w.reopen("} else {");
  w.line("return usage(argv[0]);");
  w.close();
  w.close();
  w.line("if (ticks < 1) return usage(argv[0]);");
  w.line();
  w.line("std::ofstream file;");
  w.open("if (!tracePath.empty()) {");
  w.line("file.open(tracePath, std::ios::binary);");
  w.open("if (!file) {");
  w.line("std::cerr << \"error: cannot write \" << tracePath << \"\\n\";");
  w.line("return 3;");
  w.close();
  w.close();
  w.line("std::ostream& out = tracePath.empty() ? std::cout : file;");
  w.line();
  w.open("try {");
  w.line("mlq::rt::Runtime rt(out);");
  for (const auto& inst : config.instances) {
    w.line(class_name(inst.thing.name) + " i_" + inst.name + "(" + quote(inst.name) + ", root);");
  }
  for (const auto& inst : config.instances) {
    w.line("const int n_" + inst.name + " = rt.add(i_" + inst.name + ");");
  }
  for (const auto& k : config.connectors) {
    w.line("rt.connect(n_" + k.a.instance.name + ", " + quote(k.a.port.name) + ", n_" + k.b.instance.name + ", " +
           quote(k.b.port.name) + ");");
  }
  w.line("rt.run(ticks);");
  w.reopen("} catch (const std::exception& e) {");
  w.line("out.flush();");
  w.line("std::cerr << \"error: \" << e.what() << \"\\n\";");
  w.line("return 1;");
  w.close();
  w.line("return out ? 0 : 3;");
  w.close();
  return w.take();
}

std::string build_script(const std::string& binary) {
  return R"SH(#!/bin/sh
# Compiles the project with the host C++ compiler (when sources changed) and
# runs it. Arguments are passed to the program; --build-only stops after
# compiling.
set -eu
ROOT=$(cd "$(dirname "$0")" && pwd)
CXX=${CXX:-c++}
BIN="$ROOT/bin/)SH" + binary + R"SH("
if [ ! -x "$BIN" ] || [ -n "$(find "$ROOT/src" -newer "$BIN" -print | head -n 1)" ]; then
  mkdir -p "$ROOT/bin"
  "$CXX" -std=c++20 ${CXXFLAGS:--O2} -ffp-contract=off -I"$ROOT/src" \
    "$ROOT"/src/*.cpp "$ROOT"/src/things/*.cpp -o "$BIN"
fi
if [ "${1:-}" = "--build-only" ]; then
  exit 0
fi
exec "$BIN" --root "$ROOT" "$@"
)SH";
}

std::string readme(const GenerationRequest& req, const std::vector<std::string>& data,
                   const std::vector<std::string>& missing) {
  std::string out = "# " + req.projectName + "\n\n";
  out += "Generated C++20 project for configuration `" + req.config.name + "`.\n\n";
  out += "## Build and run\n\n";
  out += "```sh\n./build.sh --ticks 50 --trace trace.tsv\n```\n\n";
  out += "`build.sh` compiles `bin/" + safe_file_name(req.projectName) +
         "` with `$CXX` (default `c++`) and runs it. Options:\n\n";
  out += "- `--ticks N` upper bound on simulated ticks (default 100); the run stops early once quiescent\n";
  out += "- `--trace FILE` writes the trace there instead of standard output\n";
  out += "- `--build-only` compiles without running\n\n";
  out += "Trace lines are `tick<TAB>instance<TAB>KIND<TAB>detail`.\n\n";
  out += "## Layout\n\n";
  out += "- `src/main.cpp` instantiates the configuration and runs the tick loop\n";
  out += "- `src/things/` holds one class per thing\n";
  out += "- `src/mlq/` and `src/ml_core.cpp` are the runtime support library\n";
  out += "- `manifest.txt` lists sha256, size and path of every other file\n";
  if (!data.empty()) {
    out += "\n## Datasets\n\n";
    for (const auto& d : data) out += "- `" + d + "`\n";
  }
  if (!missing.empty()) {
    out += "\n## Missing datasets\n\n";
    out += "These datasets were not available at generation time. Copy them into place before running:\n\n";
    for (const auto& m : missing) out += "- `" + m + "`\n";
  }
  return out;
}

class CppBackend final : public Backend {
 public:
  std::string name() const override { return std::string(kReferenceBackend); }

  ProjectBundle emit(const GenerationRequest& req) const override {
    const Model& model = req.model.model;
    std::map<std::string, std::string> files;
    files["src/mlq/value.hpp"] = std::string(embedded::value_hpp);
    files["src/mlq/ml_core.hpp"] = std::string(embedded::ml_core_hpp);
    files["src/mlq/runtime_support.hpp"] = std::string(embedded::runtime_support_hpp);
    files["src/ml_core.cpp"] = std::string(embedded::ml_core_cpp);

    std::map<std::string, std::string> datasetOf;  // bundle path -> model path
    std::vector<std::string> present;
    std::vector<std::string> missing;
    for (const auto& thing : model.things) {
      ThingEmitter em(thing);
      files["src/things/" + thing.name + ".hpp"] = em.header();
      files["src/things/" + thing.name + ".cpp"] = em.source();
      for (const auto& da : thing.analytics) {
        const std::string dest = bundle_data_path(da.datasetPath);
        auto [it, fresh] = datasetOf.emplace(dest, da.datasetPath);
        if (!fresh) {
          if (it->second != da.datasetPath) {
            throw GenerationPreconditionFailed(
                "datasets '" + it->second + "' and '" + da.datasetPath + "' would share " + dest, {});
          }
          continue;
        }
        if (auto csv = req.data(da.datasetPath)) {
          files[dest] = std::move(*csv);
          present.push_back(dest);
        } else {
          missing.push_back(dest);
        }
      }
    }
    files["src/main.cpp"] = main_source(model, req.config);
    files["build.sh"] = build_script(safe_file_name(req.projectName));
    files["README.md"] = readme(req, present, missing);
    return make_bundle(std::move(files), "build.sh");
  }
};

}  // namespace

std::unique_ptr<Backend> make_cpp_backend() { return std::make_unique<CppBackend>(); }

}  // namespace mlq::codegen
