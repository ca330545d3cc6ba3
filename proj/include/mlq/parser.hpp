#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlq/ast.hpp"
#include "mlq/diagnostic.hpp"

namespace mlq {

struct ParseResult {
  std::optional<Model> model;  // present iff diagnostics is empty
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
};

/// Maximum number of syntax diagnostics reported for one source.
inline constexpr std::size_t kMaxSyntaxDiagnostics = 20;

/// Recursive-descent parser with one token of lookahead. After a syntax error
/// it resynchronizes at the next `thing` or `configuration` keyword.
ParseResult parse(std::string_view source, std::string sourceName = {});

}  // namespace mlq
