#pragma once

// HTTP surface for the browser editor: validation, project generation and
// the example corpus. Handlers are plain functions of the request body so
// they can be exercised without sockets. The service never simulates.
//
//   POST /api/validate  {source}                 -> {valid, diagnostics}
//   POST /api/generate  {source, config, name?}  -> application/zip
//   GET  /api/examples                           -> [{name, source}]
//   GET  /api/keywords                           -> {keywords}
//   POST /api/tokens    {source}                 -> {tokens, diagnostics}
//   GET  /health                                 -> {status, version}
//
// Errors carry {error} (plus diagnostics on 422): 400 malformed body, 404
// unknown configuration or backend, 413 source over 1 MiB, 422 invalid model.

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

namespace mlq::service {

inline constexpr std::string_view kVersion = "1.0.0";
inline constexpr std::size_t kMaxSourceBytes = 1u << 20;
inline constexpr std::string_view kFlagshipExample = "smart-grid-imputation";

struct Options {
  std::filesystem::path examplesDir;  // also the base for dataset paths
  std::filesystem::path staticDir;    // served from / when set
};

struct Response {
  int status = 200;
  std::string contentType = "application/json";
  std::string body;
  std::string filename;  // Content-Disposition attachment name, if any
};

Response validate_endpoint(std::string_view body, const Options& options);
Response generate_endpoint(std::string_view body, const Options& options);
Response examples_endpoint(const Options& options);
Response tokens_endpoint(std::string_view body);
Response keywords_endpoint();
Response health_endpoint();

class Server {
 public:
  explicit Server(Options options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds the socket; port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Requires a successful bind().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mlq::service
