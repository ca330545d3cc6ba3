#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlq/diagnostic.hpp"

namespace mlq {

enum class TokenKind {
  Keyword,
  Identifier,
  IntLiteral,
  RealLiteral,
  StringLiteral,
  BoolLiteral,
  Punctuation,
  Operator,
  End,  // sentinel appended by tokenize
};

std::string_view to_string(TokenKind k);

struct Token {
  TokenKind kind = TokenKind::End;
  std::string lexeme;  // exact source text, quotes included for strings
  int line = 1;
  int col = 1;
  std::size_t offset = 0;

  bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
  bool is_keyword(std::string_view text) const { return is(TokenKind::Keyword, text); }
};

/// Reserved words of the language, sorted.
std::span<const std::string_view> keywords();
bool is_keyword(std::string_view word);

struct LexResult {
  std::vector<Token> tokens;  // ends with an End token
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

/// Splits `source` into tokens. `// ...` comments and whitespace are skipped.
/// Reports every lexical error (LEX001/LEX002/LEX003) rather than stopping at
/// the first.
LexResult tokenize(std::string_view source);

/// Decodes the escapes of a string literal lexeme (including its quotes).
std::string unescape_string(std::string_view lexeme);

}  // namespace mlq
