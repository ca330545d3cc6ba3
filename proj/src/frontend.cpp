#include "mlq/frontend.hpp"

#include "mlq/parser.hpp"

namespace mlq {

Analysis analyze(std::string_view source, std::string sourceName, const DatasetAccess* datasets) {
  Analysis out;
  auto parsed = parse(source, std::move(sourceName));
  if (!parsed.ok()) {
    out.diagnostics = std::move(parsed.diagnostics);
    return out;
  }
  auto report = validate(*parsed.model, datasets);
  out.diagnostics = std::move(report.diagnostics);
  if (!report.valid) return out;
  auto resolved = resolve_references(*parsed.model);
  if (resolved.resolved) out.resolved = std::move(resolved.resolved);
  return out;
}

}  // namespace mlq
