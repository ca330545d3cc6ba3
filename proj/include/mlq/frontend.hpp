#pragma once

// Source text to validated, resolved model in one call. Shared by the CLI and
// the service so both report identical diagnostics.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlq/diagnostic.hpp"
#include "mlq/resolve.hpp"
#include "mlq/validator.hpp"

namespace mlq {

struct Analysis {
  std::vector<Diagnostic> diagnostics;  // lexical, syntax or semantic
  std::optional<ResolvedModel> resolved;  // present iff no ERROR diagnostic

  bool valid() const { return resolved.has_value(); }
};

Analysis analyze(std::string_view source, std::string sourceName = {}, const DatasetAccess* datasets = nullptr);

}  // namespace mlq
