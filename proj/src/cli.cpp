#include "mlq/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mlq/codegen.hpp"
#include "mlq/frontend.hpp"
#include "mlq/parser.hpp"
#include "mlq/printer.hpp"
#include "mlq/service.hpp"
#include "mlq/simulator.hpp"

namespace mlq::cli {

namespace {

namespace fs = std::filesystem;

struct IOError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IOError("cannot read " + p.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw IOError("cannot write " + p.string());
}

fs::path base_dir(const std::string& file, const std::string& override) {
  if (!override.empty()) return override;
  const auto parent = fs::path(file).parent_path();
  return parent.empty() ? fs::path(".") : parent;
}

void print_diagnostics(std::ostream& os, const std::vector<Diagnostic>& ds) {
  for (const auto& d : ds) os << format_diagnostic(d) << '\n';
}

struct Args {
  std::string file;
  std::string dataDir;
  std::string saveDir;
  std::string config;
  long long ticks = 0;
  std::string trace;
  std::string outDir;
  std::string backend{codegen::kReferenceBackend};
  int port = 8080;
  std::string host = "0.0.0.0";
  std::string examples;
  std::string staticDir;
  bool check = false;
};

int run_validate(const Args& a, std::ostream& out) {
  const auto source = read_text(a.file);
  const DirectoryDatasetAccess datasets(base_dir(a.file, a.dataDir));
  const auto analysis = analyze(source, a.file, &datasets);
  print_diagnostics(out, analysis.diagnostics);
  return analysis.valid() ? kExitOk : kExitInvalid;
}

int run_simulate(const Args& a, std::ostream& out, std::ostream& err) {
  const auto source = read_text(a.file);
  const auto data = base_dir(a.file, a.dataDir);
  const DirectoryDatasetAccess datasets(data);
  auto analysis = analyze(source, a.file, &datasets);
  if (!analysis.valid()) {
    print_diagnostics(err, analysis.diagnostics);
    return kExitInvalid;
  }
  sim::SimOptions options{data, a.saveDir.empty() ? fs::path(".") : fs::path(a.saveDir)};
  std::optional<sim::Simulation> simulation;
  try {
    simulation.emplace(std::move(*analysis.resolved), a.config, options);
  } catch (const sim::UnknownConfiguration& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::ofstream file;
  if (!a.trace.empty()) {
    file.open(a.trace, std::ios::binary);
    if (!file) throw IOError("cannot write " + a.trace);
  }
  std::ostream& sink = a.trace.empty() ? out : file;
  int code = kExitOk;
  try {
    do {
      for (const auto& e : simulation->step()) sink << rt::format_trace_line(e) << '\n';
    } while (simulation->state().tick < a.ticks && !simulation->quiescent());
  } catch (const std::exception& e) {
    err << "runtime error at tick " << simulation->state().tick << ": " << e.what() << '\n';
    code = kExitInvalid;
  }
  sink.flush();
  if (!sink) throw IOError("cannot write trace");
  return code;
}

int run_generate(const Args& a, std::ostream& out, std::ostream& err) {
  const auto source = read_text(a.file);
  const auto data = base_dir(a.file, a.dataDir);
  const DirectoryDatasetAccess datasets(data, false);
  const auto analysis = analyze(source, a.file, &datasets);
  if (!analysis.valid()) {
    print_diagnostics(err, analysis.diagnostics);
    return kExitInvalid;
  }
  try {
    const auto bundle = codegen::generate(*analysis.resolved, a.config, a.backend, codegen::directory_data(data));
    codegen::write_bundle(bundle, a.outDir);
    out << "wrote " << bundle.files.size() + 1 << " files to " << a.outDir << '\n';
    return kExitOk;
  } catch (const codegen::UnknownConfiguration& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const codegen::UnknownBackend& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const codegen::GenerationPreconditionFailed& e) {
    err << "error: " << e.what() << '\n';
    print_diagnostics(err, e.diagnostics);
    return kExitInvalid;
  } catch (const codegen::BundleIO& e) {
    err << "error: " << e.what() << '\n';
    return kExitIO;
  }
}

int run_fmt(const Args& a, std::ostream& out, std::ostream& err) {
  const auto source = read_text(a.file);
  const auto parsed = parse(source, a.file);
  if (!parsed.ok()) {
    print_diagnostics(err, parsed.diagnostics);
    return kExitInvalid;
  }
  const auto text = pretty_print(*parsed.model);
  if (a.check) {
    if (text == source) return kExitOk;
    out << a.file << " is not formatted\n";
    return kExitInvalid;
  }
  if (text != source) write_text(a.file, text);
  return kExitOk;
}

int run_serve(const Args& a, std::ostream& out, std::ostream& err) {
  int port = a.port;
  if (const char* env = std::getenv("MLQ_PORT"); env && *env) {
    try {
      port = std::stoi(env);
    } catch (const std::exception&) {
      err << "error: MLQ_PORT is not a number\n";
      return kExitUsage;
    }
  }
  service::Server server(service::Options{a.examples, a.staticDir});
  const int bound = server.bind(a.host, port);
  if (bound < 0) {
    err << "error: cannot bind " << a.host << ":" << port << '\n';
    return kExitIO;
  }
  out << "listening on " << a.host << ":" << bound << std::endl;
  return server.listen() ? kExitOk : kExitIO;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modeling toolchain: validate, simulate, generate and serve models", "mlq"};
  app.require_subcommand(1);
  Args a;
#ifdef MLQ_DEFAULT_EXAMPLES_DIR
  a.examples = MLQ_DEFAULT_EXAMPLES_DIR;
#endif

  auto* validate = app.add_subcommand("validate", "Check a model and print diagnostics");
  validate->add_option("file", a.file, "Model source")->required();
  validate->add_option("--data-dir", a.dataDir, "Base directory for dataset paths (default: the model's directory)");

  auto* simulate = app.add_subcommand("simulate", "Run a configuration and print its trace");
  simulate->add_option("file", a.file, "Model source")->required();
  simulate->add_option("--config", a.config, "Configuration name")->required();
  simulate->add_option("--ticks", a.ticks, "Maximum number of ticks")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--trace", a.trace, "Write the trace to this file instead of stdout");
  simulate->add_option("--data-dir", a.dataDir, "Base directory for dataset paths (default: the model's directory)");
  simulate->add_option("--save-dir", a.saveDir, "Base directory for saved models (default: .)");

  auto* generate = app.add_subcommand("generate", "Generate a buildable project");
  generate->add_option("file", a.file, "Model source")->required();
  generate->add_option("--config", a.config, "Configuration name")->required();
  generate->add_option("--out", a.outDir, "Output directory (files are never overwritten)")->required();
  generate->add_option("--backend", a.backend, "Code generation backend")->capture_default_str();
  generate->add_option("--data-dir", a.dataDir, "Base directory for dataset paths (default: the model's directory)");

  auto* serve = app.add_subcommand("serve", "Start the HTTP service (MLQ_PORT overrides --port)");
  serve->add_option("--port", a.port, "TCP port")->capture_default_str();
  serve->add_option("--host", a.host, "Listen address")->capture_default_str();
  serve->add_option("--examples", a.examples, "Directory of example models")->capture_default_str();
  serve->add_option("--static", a.staticDir, "Directory served from /");

  auto* fmt = app.add_subcommand("fmt", "Pretty-print a model in place");
  fmt->add_option("file", a.file, "Model source")->required();
  fmt->add_flag("--check", a.check, "Report instead of rewriting; exit 1 when not formatted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*validate) return run_validate(a, out);
    if (*simulate) return run_simulate(a, out, err);
    if (*generate) return run_generate(a, out, err);
    if (*serve) return run_serve(a, out, err);
    if (*fmt) return run_fmt(a, out, err);
  } catch (const IOError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIO;
  }
  return kExitUsage;
}

int cli_main(int argc, const char* const* argv) { return cli_main(argc, argv, std::cout, std::cerr); }

}  // namespace mlq::cli
