#pragma once

// Model-to-text generation of complete, buildable projects.
//
// A bundle is a map of relative paths to file contents plus a manifest of
// (path, size, sha256) for every file. `manifest.txt` itself is rendered from
// the manifest when the bundle is written or zipped and is not listed in it.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mlq/diagnostic.hpp"
#include "mlq/resolve.hpp"

namespace mlq::codegen {

inline constexpr std::string_view kReferenceBackend = "self";
inline constexpr std::string_view kManifestPath = "manifest.txt";

struct ManifestEntry {
  std::string path;
  std::size_t size = 0;
  std::string sha256;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct ProjectBundle {
  std::map<std::string, std::string> files;
  std::vector<ManifestEntry> manifest;  // sorted by path
  std::string entrypoint;

  /// `sha256  size  path` per line.
  std::string manifest_text() const;
};

/// Builds the manifest for `files`. Throws std::invalid_argument when the
/// entrypoint is not among the files.
ProjectBundle make_bundle(std::map<std::string, std::string> files, std::string entrypoint);

std::vector<ManifestEntry> parse_manifest(std::string_view text);

std::string sha256_hex(std::string_view data);

class UnknownBackend : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GenerationPreconditionFailed : public std::runtime_error {
 public:
  GenerationPreconditionFailed(const std::string& what, std::vector<Diagnostic> diags)
      : std::runtime_error(what), diagnostics(std::move(diags)) {}
  std::vector<Diagnostic> diagnostics;
};

class BundleIO : public std::runtime_error {
 public:
  BundleIO(const std::string& what, std::filesystem::path p) : std::runtime_error(what), path(std::move(p)) {}
  std::filesystem::path path;
};

/// Returns the CSV text of a dataset path as written in the model, or nullopt
/// when it is not available to the generator.
using DataProvider = std::function<std::optional<std::string>(std::string_view datasetPath)>;

/// DataProvider reading files relative to `base`.
DataProvider directory_data(std::filesystem::path base);

struct GenerationRequest {
  const ResolvedModel& model;
  const ConfigurationDef& config;
  std::string projectName;
  DataProvider data;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  /// Produces every file of the project and names the entrypoint.
  virtual ProjectBundle emit(const GenerationRequest& request) const = 0;
};

class BackendRegistry {
 public:
  /// Throws std::invalid_argument on a duplicate name.
  void add(std::unique_ptr<Backend> backend);
  const Backend* find(std::string_view name) const;
  std::vector<std::string> names() const;

  /// Registry holding the reference backend.
  static const BackendRegistry& defaults();

 private:
  std::vector<std::unique_ptr<Backend>> backends_;
};

std::unique_ptr<Backend> make_cpp_backend();

/// Validates the model (without dataset checks) and runs `backend` on one
/// configuration. Output is byte-identical for identical inputs.
ProjectBundle generate(const ResolvedModel& model, std::string_view configName,
                       std::string_view backend = kReferenceBackend, const DataProvider& data = {},
                       const BackendRegistry& registry = BackendRegistry::defaults());

/// Writes every file plus manifest.txt under `outDir`. Refuses to overwrite
/// an existing file (BundleIO naming it).
void write_bundle(const ProjectBundle& bundle, const std::filesystem::path& outDir);

/// Stored (uncompressed) zip archive of the files plus manifest.txt.
std::string zip_bundle(const ProjectBundle& bundle);

/// Reads back every regular file under `dir` (manifest.txt included).
std::map<std::string, std::string> read_tree(const std::filesystem::path& dir);

}  // namespace mlq::codegen
