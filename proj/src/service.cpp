#include "mlq/service.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <optional>
#include <variant>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "mlq/codegen.hpp"
#include "mlq/frontend.hpp"
#include "mlq/lexer.hpp"

namespace mlq::service {

namespace {

using nlohmann::json;

Response json_response(int status, const json& j) {
  Response r;
  r.status = status;
  r.body = j.dump();
  return r;
}

Response error(int status, const std::string& message) { return json_response(status, json{{"error", message}}); }

json diagnostics_json(const std::vector<Diagnostic>& ds) {
  json out = json::array();
  for (const auto& d : ds) {
    out.push_back({{"severity", std::string(to_string(d.severity))},
                   {"code", d.code},
                   {"message", d.message},
                   {"line", d.line},
                   {"col", d.col}});
  }
  return out;
}

// Dataset paths from untrusted sources must stay inside the examples
// directory.
std::optional<std::filesystem::path> confined(const std::filesystem::path& base, std::string_view rel) {
  if (base.empty()) return std::nullopt;
  const std::filesystem::path p = std::filesystem::path(std::string(rel)).lexically_normal();
  if (p.empty() || p.is_absolute() || p.has_root_name()) return std::nullopt;
  if (!p.empty() && *p.begin() == "..") return std::nullopt;
  return base / p;
}

class ExampleDatasets : public DatasetAccess {
 public:
  explicit ExampleDatasets(std::filesystem::path base) : base_(std::move(base)) {}

  std::optional<std::vector<std::string>> header(std::string_view path) const override {
    const auto p = confined(base_, path);
    if (!p) return std::nullopt;
    return DirectoryDatasetAccess(p->parent_path(), false).header(p->filename().string());
  }
  bool report_missing() const override { return false; }

 private:
  std::filesystem::path base_;
};

struct SourceRequest {
  json body;
  std::string source;
};

// Parses `{source: text, ...}`; returns an error response when malformed.
std::variant<SourceRequest, Response> read_source(std::string_view body) {
  if (body.size() > 4 * kMaxSourceBytes) return error(413, "request body too large");
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return error(400, "body must be a JSON object");
  const auto it = j.find("source");
  if (it == j.end() || !it->is_string()) return error(400, "field 'source' must be a string");
  std::string source = it->get<std::string>();
  if (source.size() > kMaxSourceBytes) return error(413, "source exceeds 1 MiB");
  return SourceRequest{std::move(j), std::move(source)};
}

std::string attachment_name(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                    c == '-' || c == '.';
    out += ok ? c : '_';
  }
  return out.empty() ? "model" : out;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

Response validate_endpoint(std::string_view body, const Options& options) {
  auto req = read_source(body);
  if (auto* r = std::get_if<Response>(&req)) return *r;
  const auto& source = std::get<SourceRequest>(req).source;
  const ExampleDatasets datasets(options.examplesDir);
  const auto analysis = analyze(source, "model.mlq", options.examplesDir.empty() ? nullptr : &datasets);
  return json_response(200, json{{"valid", analysis.valid()}, {"diagnostics", diagnostics_json(analysis.diagnostics)}});
}

Response generate_endpoint(std::string_view body, const Options& options) {
  auto req = read_source(body);
  if (auto* r = std::get_if<Response>(&req)) return *r;
  const auto& [j, source] = std::get<SourceRequest>(req);
  const auto config = j.find("config");
  if (config == j.end() || !config->is_string()) return error(400, "field 'config' must be a string");
  std::string name = "model";
  if (const auto it = j.find("name"); it != j.end()) {
    if (!it->is_string()) return error(400, "field 'name' must be a string");
    name = attachment_name(it->get<std::string>());
  }
  std::string backend(codegen::kReferenceBackend);
  if (const auto it = j.find("backend"); it != j.end()) {
    if (!it->is_string()) return error(400, "field 'backend' must be a string");
    backend = it->get<std::string>();
  }

  const ExampleDatasets datasets(options.examplesDir);
  const auto analysis = analyze(source, name + ".mlq", options.examplesDir.empty() ? nullptr : &datasets);
  if (!analysis.valid()) {
    return json_response(422, json{{"error", "model is invalid"}, {"valid", false},
                                   {"diagnostics", diagnostics_json(analysis.diagnostics)}});
  }
  const auto base = options.examplesDir;
  const codegen::DataProvider data = [base](std::string_view path) -> std::optional<std::string> {
    const auto p = confined(base, path);
    if (!p || !std::filesystem::is_regular_file(*p)) return std::nullopt;
    return read_file(*p);
  };
  try {
    const auto bundle = codegen::generate(*analysis.resolved, config->get<std::string>(), backend, data);
    Response r;
    r.contentType = "application/zip";
    r.body = codegen::zip_bundle(bundle);
    r.filename = name + "-generated.zip";
    return r;
  } catch (const codegen::UnknownConfiguration& e) {
    return error(404, e.what());
  } catch (const codegen::UnknownBackend& e) {
    return error(404, e.what());
  } catch (const codegen::GenerationPreconditionFailed& e) {
    return json_response(422, json{{"error", e.what()}, {"valid", false},
                                   {"diagnostics", diagnostics_json(e.diagnostics)}});
  }
}

Response examples_endpoint(const Options& options) {
  std::vector<std::pair<std::string, std::filesystem::path>> found;
  std::error_code ec;
  if (!options.examplesDir.empty() && std::filesystem::is_directory(options.examplesDir, ec)) {
    for (const auto& e : std::filesystem::directory_iterator(options.examplesDir, ec)) {
      if (e.is_regular_file() && e.path().extension() == ".mlq") found.emplace_back(e.path().stem().string(), e.path());
    }
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    const bool fa = a.first == kFlagshipExample;
    const bool fb = b.first == kFlagshipExample;
    if (fa != fb) return fa;
    return a.first < b.first;
  });
  json out = json::array();
  for (const auto& [name, path] : found) out.push_back({{"name", name}, {"source", read_file(path)}});
  return json_response(200, out);
}

Response tokens_endpoint(std::string_view body) {
  auto req = read_source(body);
  if (auto* r = std::get_if<Response>(&req)) return *r;
  const auto lexed = tokenize(std::get<SourceRequest>(req).source);
  json tokens = json::array();
  for (const auto& t : lexed.tokens) {
    if (t.kind == TokenKind::End) continue;
    tokens.push_back({{"kind", std::string(to_string(t.kind))}, {"lexeme", t.lexeme}, {"line", t.line}, {"col", t.col}});
  }
  return json_response(200, json{{"tokens", tokens}, {"diagnostics", diagnostics_json(lexed.diagnostics)}});
}

Response keywords_endpoint() {
  json out = json::array();
  for (const auto k : keywords()) out.push_back(std::string(k));
  return json_response(200, json{{"keywords", out}});
}

Response health_endpoint() { return json_response(200, json{{"status", "ok"}, {"version", std::string(kVersion)}}); }

struct Server::Impl {
  Options options;
  httplib::Server http;
};

namespace {

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  if (!r.filename.empty()) res.set_header("Content-Disposition", "attachment; filename=\"" + r.filename + "\"");
  res.set_content(r.body, r.contentType);
}

}  // namespace

Server::Server(Options options) : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  auto& http = impl_->http;
  const Options* opts = &impl_->options;
  http.set_payload_max_length(8 * kMaxSourceBytes);
  http.Post("/api/validate", [opts](const httplib::Request& req, httplib::Response& res) {
    reply(res, validate_endpoint(req.body, *opts));
  });
  http.Post("/api/generate", [opts](const httplib::Request& req, httplib::Response& res) {
    reply(res, generate_endpoint(req.body, *opts));
  });
  http.Post("/api/tokens",
            [](const httplib::Request& req, httplib::Response& res) { reply(res, tokens_endpoint(req.body)); });
  http.Get("/api/examples",
           [opts](const httplib::Request&, httplib::Response& res) { reply(res, examples_endpoint(*opts)); });
  http.Get("/api/keywords", [](const httplib::Request&, httplib::Response& res) { reply(res, keywords_endpoint()); });
  http.Get("/health", [](const httplib::Request&, httplib::Response& res) { reply(res, health_endpoint()); });
  std::error_code ec;
  if (!impl_->options.staticDir.empty() && std::filesystem::is_directory(impl_->options.staticDir, ec)) {
    http.set_mount_point("/", impl_->options.staticDir.string());
  }
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  if (port == 0) return impl_->http.bind_to_any_port(host);
  return impl_->http.bind_to_port(host, port) ? port : -1;
}

bool Server::listen() { return impl_->http.listen_after_bind(); }

void Server::stop() { impl_->http.stop(); }

}  // namespace mlq::service
