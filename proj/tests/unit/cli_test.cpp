#include "mlq/cli.hpp"
#include "support.hpp"

namespace cli = mlq::cli;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mlq");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string model(const std::string& name) { return (test::models_dir() / (name + ".mlq")).string(); }

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli({}).code == cli::kExitUsage);
  CHECK(run_cli({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run_cli({"simulate", model("blinker"), "--config", "Main"}).code == cli::kExitUsage);
  CHECK(run_cli({"simulate", model("blinker"), "--config", "Main", "--ticks", "0"}).code == cli::kExitUsage);
  CHECK(run_cli({"simulate", model("blinker"), "--config", "Nope", "--ticks", "3"}).code == cli::kExitUsage);
  CHECK(run_cli({"--help"}).code == cli::kExitOk);
}

TEST_CASE("validate") {
  auto r = run_cli({"validate", model("smart-grid-imputation")});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.empty());
  r = run_cli({"validate", (test::errors_dir() / "val003-type-mismatch.mlq").string()});
  CHECK(r.code == cli::kExitInvalid);
  CHECK(r.out.rfind("ERROR VAL003 7:", 0) == 0);
  r = run_cli({"validate", (test::errors_dir() / "val005-unreachable-state.mlq").string()});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.rfind("WARNING VAL005 7:", 0) == 0);
  CHECK(run_cli({"validate", "/nonexistent/model.mlq"}).code == cli::kExitIO);
}

TEST_CASE("a missing dataset is reported by validate and fails simulate at runtime") {
  test::TempDir dir;
  const auto src = test::slurp(model("smart-grid-imputation"));
  test::spit(dir / "m.mlq", src);
  auto r = run_cli({"validate", (dir / "m.mlq").string()});
  CHECK(r.code == cli::kExitInvalid);
  CHECK(r.out.find("VAL007") != std::string::npos);
  // Without the dataset the model is still generated, and the README says so.
  r = run_cli({"generate", (dir / "m.mlq").string(), "--config", "Main", "--out", (dir / "out").string()});
  CHECK(r.code == cli::kExitOk);
  CHECK(test::slurp(dir / "out/README.md").find("data/grid_load.csv") != std::string::npos);
}

TEST_CASE("simulate reproduces the golden trace") {
  test::TempDir dir;
  const auto golden = test::slurp(test::corpus() / "golden/smart-grid-imputation.trace.tsv");
  auto r = run_cli({"simulate", model("smart-grid-imputation"), "--config", "Main", "--ticks", "30", "--save-dir",
                dir.path().string()});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out == golden);
  r = run_cli({"simulate", model("smart-grid-imputation"), "--config", "Main", "--ticks", "30", "--save-dir",
           dir.path().string(), "--trace", (dir / "t.tsv").string()});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.empty());
  CHECK(test::slurp(dir / "t.tsv") == golden);
  CHECK(run_cli({"simulate", model("blinker"), "--config", "Main", "--ticks", "3", "--trace", "/nonexistent/t.tsv"})
            .code == cli::kExitIO);
}

TEST_CASE("simulate reports runtime faults with exit 1") {
  test::TempDir dir;
  const auto r = run_cli({"simulate", model("smart-grid-imputation"), "--config", "Main", "--ticks", "5", "--data-dir",
                      dir.path().string(), "--save-dir", dir.path().string()});
  // The dataset is missing under the overridden data directory.
  CHECK(r.code == cli::kExitInvalid);
}

TEST_CASE("generate") {
  test::TempDir dir;
  const auto out = (dir / "p").string();
  auto r = run_cli({"generate", model("ping-pong"), "--config", "Main", "--out", out});
  CHECK(r.code == cli::kExitOk);
  CHECK(std::filesystem::exists(dir / "p/manifest.txt"));
  CHECK(run_cli({"generate", model("ping-pong"), "--config", "Main", "--out", out}).code == cli::kExitIO);
  CHECK(run_cli({"generate", model("ping-pong"), "--config", "Nope", "--out", (dir / "q").string()}).code ==
        cli::kExitUsage);
  CHECK(run_cli({"generate", model("ping-pong"), "--config", "Main", "--backend", "cobol", "--out",
             (dir / "q").string()})
            .code == cli::kExitUsage);
  CHECK(run_cli({"generate", (test::errors_dir() / "val008-guard-not-bool.mlq").string(), "--config", "Main", "--out",
             (dir / "q").string()})
            .code == cli::kExitInvalid);
}

TEST_CASE("fmt") {
  test::TempDir dir;
  test::spit(dir / "m.mlq", "thing A { statechart init S { state S { on entry { print (1+2)*3 } } } }\n");
  const auto file = (dir / "m.mlq").string();
  auto r = run_cli({"fmt", "--check", file});
  CHECK(r.code == cli::kExitInvalid);
  CHECK(r.out.find("is not formatted") != std::string::npos);
  CHECK(run_cli({"fmt", file}).code == cli::kExitOk);
  CHECK(test::slurp(dir / "m.mlq").find("print (1 + 2) * 3\n") != std::string::npos);
  CHECK(run_cli({"fmt", "--check", file}).code == cli::kExitOk);
  test::spit(dir / "bad.mlq", "thing");
  CHECK(run_cli({"fmt", (dir / "bad.mlq").string()}).code == cli::kExitInvalid);
}

TEST_CASE("the installed binary uses the same exit codes") {
  const std::string bin = MLQ_CLI_PATH;
  CHECK(test::run(test::quote(bin) + " validate " + test::quote(model("blinker"))).status == 0);
  CHECK(test::run(test::quote(bin) + " validate /nonexistent.mlq 2>/dev/null").status == 3);
  CHECK(test::run(test::quote(bin) + " 2>/dev/null").status == 2);
  const auto r = test::run(test::quote(bin) + " simulate " + test::quote(model("hermit")) +
                           " --config Main --ticks 5");
  CHECK(r.status == 0);
  CHECK(r.out == "0\th\tSTATE_ENTER\tResting\n0\th\tPRINT\thermit\n0\th\tPRINT\tat rest\n");
}
