#include "mlq/codegen.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include "mlq/validator.hpp"
#include "mlq/zip.hpp"

namespace mlq::codegen {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string ProjectBundle::manifest_text() const {
  std::string out;
  for (const auto& e : manifest) {
    out += e.sha256 + "  " + std::to_string(e.size) + "  " + e.path + "\n";
  }
  return out;
}

ProjectBundle make_bundle(std::map<std::string, std::string> files, std::string entrypoint) {
  if (!files.count(entrypoint)) throw std::invalid_argument("entrypoint '" + entrypoint + "' is not in the bundle");
  if (files.count(std::string(kManifestPath))) throw std::invalid_argument("manifest.txt is reserved");
  ProjectBundle b;
  for (const auto& [path, content] : files) b.manifest.push_back({path, content.size(), sha256_hex(content)});
  b.files = std::move(files);
  b.entrypoint = std::move(entrypoint);
  return b;
}

std::vector<ManifestEntry> parse_manifest(std::string_view text) {
  std::vector<ManifestEntry> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto a = line.find("  ");
    const auto b = a == std::string::npos ? a : line.find("  ", a + 2);
    if (b == std::string::npos) throw std::invalid_argument("malformed manifest line: " + line);
    ManifestEntry e;
    e.sha256 = line.substr(0, a);
    e.size = std::stoull(line.substr(a + 2, b - a - 2));
    e.path = line.substr(b + 2);
    out.push_back(std::move(e));
  }
  return out;
}

DataProvider directory_data(std::filesystem::path base) {
  return [base = std::move(base)](std::string_view path) -> std::optional<std::string> {
    std::ifstream in(base / std::filesystem::path(std::string(path)), std::ios::binary);
    if (!in) return std::nullopt;
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
}

void BackendRegistry::add(std::unique_ptr<Backend> backend) {
  if (find(backend->name())) throw std::invalid_argument("backend '" + backend->name() + "' already registered");
  backends_.push_back(std::move(backend));
}

const Backend* BackendRegistry::find(std::string_view name) const {
  for (const auto& b : backends_) {
    if (b->name() == name) return b.get();
  }
  return nullptr;
}

std::vector<std::string> BackendRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& b : backends_) out.push_back(b->name());
  return out;
}

const BackendRegistry& BackendRegistry::defaults() {
  static const BackendRegistry registry = [] {
    BackendRegistry r;
    r.add(make_cpp_backend());
    return r;
  }();
  return registry;
}

ProjectBundle generate(const ResolvedModel& model, std::string_view configName, std::string_view backend,
                       const DataProvider& data, const BackendRegistry& registry) {
  const Backend* be = registry.find(backend);
  if (!be) throw UnknownBackend("unknown backend '" + std::string(backend) + "'");
  auto report = validate(model.model);
  if (!report.valid) {
    throw GenerationPreconditionFailed("model has validation errors", std::move(report.diagnostics));
  }
  const auto* config = model.model.find_configuration(configName);
  if (!config) throw UnknownConfiguration("unknown configuration '" + std::string(configName) + "'");
  const DataProvider none = [](std::string_view) { return std::optional<std::string>(); };
  std::string project = std::filesystem::path(model.model.sourceName).stem().string();
  if (project.empty()) project = "model";
  GenerationRequest request{model, *config, project, data ? data : none};
  return be->emit(request);
}

std::map<std::string, std::string> read_tree(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    out[std::filesystem::relative(entry.path(), dir).generic_string()] =
        std::string(std::istreambuf_iterator<char>(in), {});
  }
  return out;
}

namespace {

bool is_executable(std::string_view path) { return path.size() >= 3 && path.substr(path.size() - 3) == ".sh"; }

}  // namespace

void write_bundle(const ProjectBundle& bundle, const std::filesystem::path& outDir) {
  namespace fs = std::filesystem;
  auto all = bundle.files;
  all[std::string(kManifestPath)] = bundle.manifest_text();
  for (const auto& [rel, _] : all) {
    const fs::path p = outDir / rel;
    if (fs::exists(p)) throw BundleIO("refusing to overwrite " + p.string(), p);
  }
  for (const auto& [rel, content] : all) {
    const fs::path p = outDir / rel;
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec) throw BundleIO("cannot create directory " + p.parent_path().string() + ": " + ec.message(), p);
    std::ofstream out(p, std::ios::binary);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw BundleIO("cannot write " + p.string(), p);
    if (is_executable(rel)) {
      fs::permissions(p, fs::perms::owner_exec | fs::perms::group_exec | fs::perms::others_exec,
                      fs::perm_options::add, ec);
    }
  }
}

std::string zip_bundle(const ProjectBundle& bundle) {
  std::vector<zip::Entry> entries;
  auto all = bundle.files;
  all[std::string(kManifestPath)] = bundle.manifest_text();
  for (const auto& [rel, content] : all) {
    entries.push_back({rel, content, is_executable(rel) ? 0100755u : 0100644u});
  }
  return zip::write_archive(entries);
}

}  // namespace mlq::codegen
