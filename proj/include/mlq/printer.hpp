#pragma once

#include <string>

#include "mlq/ast.hpp"

namespace mlq {

/// Canonical source text for `model`: two-space indentation, one declaration
/// per line, minimal parentheses. Re-parsing the output yields a model that
/// model_equals the input.
std::string pretty_print(const Model& model);

std::string print_expr(const Expr& e);

/// Source form of a literal value (REAL always carries a '.' or exponent).
std::string print_literal(const Value& v);

}  // namespace mlq
