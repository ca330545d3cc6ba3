#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mlq {

enum class Severity { Error, Warning };

/// Diagnostic codes (closed set):
///   LEX001 unknown character          LEX002 unterminated string
///   LEX003 numeric literal out of range
///   SYN001 unexpected token           SYN002 premature end of input
///   VAL001 unresolved reference       VAL002 duplicate name
///   VAL003 type mismatch              VAL004 send arity/type mismatch
///   VAL005 unreachable state (warning) VAL006 port incompatibility
///   VAL007 dataset column missing     VAL008 guard not BOOL
///   VAL009 da_predict/da_observe arity VAL010 after(0) or knn(0)
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  int line = 1;
  int col = 1;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

inline std::string_view to_string(Severity s) { return s == Severity::Error ? "ERROR" : "WARNING"; }

/// `SEVERITY CODE line:col message`
inline std::string format_diagnostic(const Diagnostic& d) {
  return std::string(to_string(d.severity)) + " " + d.code + " " + std::to_string(d.line) + ":" +
         std::to_string(d.col) + " " + d.message;
}

inline bool has_errors(const std::vector<Diagnostic>& ds) {
  for (const auto& d : ds) {
    if (d.severity == Severity::Error) return true;
  }
  return false;
}

}  // namespace mlq
