#pragma once

// Scalar values and their canonical text forms. Shared verbatim by the
// toolchain and by generated projects, so it depends on the standard library
// only.

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <variant>

namespace mlq {

using Int = std::int64_t;

// Index order matches DType: INT, REAL, BOOL, STRING.
using Value = std::variant<Int, double, bool, std::string>;

inline Value box_int(Int v) { return Value(std::in_place_index<0>, v); }
inline Value box_real(double v) { return Value(std::in_place_index<1>, v); }
inline Value box_bool(bool v) { return Value(std::in_place_index<2>, v); }
inline Value box_str(std::string v) { return Value(std::in_place_index<3>, std::move(v)); }

// INT arithmetic wraps modulo 2^64.
inline Int wrap_add(Int a, Int b) {
  return static_cast<Int>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
inline Int wrap_sub(Int a, Int b) {
  return static_cast<Int>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
inline Int wrap_mul(Int a, Int b) {
  return static_cast<Int>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}
inline Int wrap_neg(Int a) { return static_cast<Int>(0u - static_cast<std::uint64_t>(a)); }

inline double to_real(Int v) { return static_cast<double>(v); }
inline double to_real(double v) { return v; }

/// REAL values in traces always use six decimals.
inline std::string format_real(double v) {
  const int n = std::snprintf(nullptr, 0, "%.6f", v);
  std::string out(static_cast<std::size_t>(n), '\0');
  std::snprintf(out.data(), out.size() + 1, "%.6f", v);
  return out;
}

/// Escapes backslash, double quote, newline, tab and carriage return so that
/// any value fits on one trace line.
inline std::string escape_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

/// Message arguments: strings are quoted.
inline std::string format_value(const Value& v) {
  switch (v.index()) {
    case 0: return std::to_string(std::get<0>(v));
    case 1: return format_real(std::get<1>(v));
    case 2: return std::get<2>(v) ? "true" : "false";
    default: return "\"" + escape_text(std::get<3>(v)) + "\"";
  }
}

/// PRINT detail: like format_value but strings are not quoted.
inline std::string format_print(const Value& v) {
  if (v.index() == 3) return escape_text(std::get<3>(v));
  return format_value(v);
}

}  // namespace mlq
