#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mlq/frontend.hpp"
#include "mlq/parser.hpp"
#include "mlq/resolve.hpp"

namespace test {

namespace fs = std::filesystem;

inline fs::path corpus() { return MLQ_CORPUS_DIR; }
inline fs::path models_dir() { return corpus() / "models"; }
inline fs::path errors_dir() { return corpus() / "errors"; }

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot read " << p.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline void spit(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::vector<fs::path> sources_in(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".mlq") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Fresh directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("mlq-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

inline mlq::Model parse_ok(const std::string& source) {
  auto r = mlq::parse(source);
  INFO(source);
  for (const auto& d : r.diagnostics) INFO(mlq::format_diagnostic(d));
  REQUIRE(r.ok());
  return *r.model;
}

inline mlq::ResolvedModel resolve_ok(const std::string& source, const std::string& name = "test.mlq") {
  auto a = mlq::analyze(source, name);
  std::string diags;
  for (const auto& d : a.diagnostics) diags += mlq::format_diagnostic(d) + "\n";
  INFO(diags);
  REQUIRE(a.valid());
  return *a.resolved;
}

inline std::vector<std::string> codes(const std::vector<mlq::Diagnostic>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.code);
  return out;
}

struct Exec {
  int status = -1;
  std::string out;
};

/// Runs a shell command, capturing stdout.
inline Exec run(const std::string& command) {
  Exec r;
  FILE* p = ::popen(command.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = ::pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

inline std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace test
