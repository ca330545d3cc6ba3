#include "mlq/lexer.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "mlq/value.hpp"

namespace mlq {

namespace {

constexpr std::array<std::string_view, 49> kKeywords = {
    "Bool",        "Int",         "Real",       "String",     "action",        "after",     "and",
    "configuration", "connector", "da_observe", "da_predict", "da_save",       "da_train",  "data_analytics",
    "dataset",     "else",        "end",        "entry",      "event",         "exit",      "features",
    "guard",       "if",          "init",       "instance",   "knn",           "label",     "linear_regression",
    "message",     "model",       "not",        "on",         "or",            "port",      "print",
    "property",    "provided",    "receives",   "required",   "save_to",       "sends",     "state",
    "statechart",  "then",        "thing",      "transition", "var",           "true",      "false",
};

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  LexResult run() {
    LexResult out;
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) break;
      lex_one(out);
    }
    out.tokens.push_back(Token{TokenKind::End, "", line_, col_, pos_});
    return out;
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++col_;
    }
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  void lex_one(LexResult& out) {
    const std::size_t start = pos_;
    const int line = line_;
    const int col = col_;
    auto emit = [&](TokenKind kind) {
      out.tokens.push_back(Token{kind, std::string(src_.substr(start, pos_ - start)), line, col, start});
    };
    auto error = [&](const char* code, std::string msg) {
      out.diagnostics.push_back(Diagnostic{Severity::Error, code, std::move(msg), line, col});
    };

    const char c = peek();
    if (is_ident_start(c)) {
      while (is_ident_char(peek())) advance();
      const auto word = src_.substr(start, pos_ - start);
      if (word == "true" || word == "false") {
        emit(TokenKind::BoolLiteral);
      } else {
        emit(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier);
      }
      return;
    }
    if (is_digit(c)) {
      lex_number(out, start, line, col);
      return;
    }
    if (c == '"') {
      advance();
      while (true) {
        const char d = peek();
        if (pos_ >= src_.size() || d == '\n') {
          error("LEX002", "unterminated string literal");
          return;
        }
        if (d == '\\' && pos_ + 1 < src_.size() && peek(1) != '\n') {
          advance();
          advance();
          continue;
        }
        advance();
        if (d == '"') break;
      }
      emit(TokenKind::StringLiteral);
      return;
    }

    // Longest match first.
    static constexpr std::array<std::string_view, 2> kMultiPunct = {"<->", "->"};
    static constexpr std::array<std::string_view, 4> kMultiOps = {"<=", ">=", "==", "!="};
    for (auto p : kMultiPunct) {
      if (src_.substr(pos_).starts_with(p)) {
        for (std::size_t i = 0; i < p.size(); ++i) advance();
        emit(TokenKind::Punctuation);
        return;
      }
    }
    for (auto p : kMultiOps) {
      if (src_.substr(pos_).starts_with(p)) {
        advance();
        advance();
        emit(TokenKind::Operator);
        return;
      }
    }
    constexpr std::string_view kPunct = "{}():,.;?!";
    constexpr std::string_view kOps = "+-*/<>=";
    if (kPunct.find(c) != std::string_view::npos) {
      advance();
      emit(TokenKind::Punctuation);
      return;
    }
    if (kOps.find(c) != std::string_view::npos) {
      advance();
      emit(TokenKind::Operator);
      return;
    }

    // Unknown character; consume a whole UTF-8 sequence.
    advance();
    while (pos_ < src_.size() && (static_cast<unsigned char>(peek()) & 0xC0) == 0x80) advance();
    const auto bad = src_.substr(start, pos_ - start);
    error("LEX001", "unknown character '" + std::string(bad) + "'");
  }

  void lex_number(LexResult& out, std::size_t start, int line, int col) {
    bool real = false;
    while (is_digit(peek())) advance();
    if (peek() == '.' && is_digit(peek(1))) {
      real = true;
      advance();
      while (is_digit(peek())) advance();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (is_digit(peek(1)) || ((peek(1) == '+' || peek(1) == '-') && is_digit(peek(2))))) {
      real = true;
      advance();
      if (peek() == '+' || peek() == '-') advance();
      while (is_digit(peek())) advance();
    }
    const auto text = src_.substr(start, pos_ - start);
    bool in_range = true;
    if (real) {
      double v = 0;
      const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      in_range = ec == std::errc() && std::isfinite(v);
    } else {
      Int v = 0;
      const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      in_range = ec == std::errc();
    }
    if (!in_range) {
      out.diagnostics.push_back(
          Diagnostic{Severity::Error, "LEX003", "numeric literal out of range: " + std::string(text), line, col});
      return;
    }
    out.tokens.push_back(
        Token{real ? TokenKind::RealLiteral : TokenKind::IntLiteral, std::string(text), line, col, start});
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::string_view to_string(TokenKind k) {
  switch (k) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::IntLiteral: return "int-literal";
    case TokenKind::RealLiteral: return "real-literal";
    case TokenKind::StringLiteral: return "string-literal";
    case TokenKind::BoolLiteral: return "bool-literal";
    case TokenKind::Punctuation: return "punctuation";
    case TokenKind::Operator: return "operator";
    case TokenKind::End: return "end-of-input";
  }
  return "?";
}

std::span<const std::string_view> keywords() {
  static const auto sorted = [] {
    std::vector<std::string_view> ks;
    for (auto k : kKeywords) {
      if (k != "true" && k != "false") ks.push_back(k);
    }
    std::sort(ks.begin(), ks.end());
    return ks;
  }();
  return sorted;
}

bool is_keyword(std::string_view word) {
  const auto ks = keywords();
  return std::binary_search(ks.begin(), ks.end(), word);
}

LexResult tokenize(std::string_view source) { return Lexer(source).run(); }

std::string unescape_string(std::string_view lexeme) {
  std::string out;
  if (lexeme.size() < 2) return out;
  const auto body = lexeme.substr(1, lexeme.size() - 2);
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (c != '\\' || i + 1 >= body.size()) {
      out += c;
      continue;
    }
    const char e = body[++i];
    switch (e) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      case '"': out += '"'; break;
      case '\\': out += '\\'; break;
      default:
        out += '\\';
        out += e;
    }
  }
  return out;
}

}  // namespace mlq
