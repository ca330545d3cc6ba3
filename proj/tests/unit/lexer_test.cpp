#include <random>

#include "mlq/lexer.hpp"
#include "support.hpp"

using namespace mlq;
using test::codes;

namespace {

std::vector<std::string> lexemes(const LexResult& r) {
  std::vector<std::string> out;
  for (const auto& t : r.tokens) {
    if (t.kind != TokenKind::End) out.push_back(t.lexeme);
  }
  return out;
}

}  // namespace

TEST_CASE("lexer splits a declaration into tokens with positions") {
  const auto r = tokenize("property x : Int = 42");
  REQUIRE(r.ok());
  REQUIRE(r.tokens.size() == 7);
  CHECK(r.tokens[0].kind == TokenKind::Keyword);
  CHECK(r.tokens[1].kind == TokenKind::Identifier);
  CHECK(r.tokens[1].col == 10);
  CHECK(r.tokens[2].kind == TokenKind::Punctuation);
  CHECK(r.tokens[3].kind == TokenKind::Keyword);
  CHECK(r.tokens[4].kind == TokenKind::Operator);
  CHECK(r.tokens[5].kind == TokenKind::IntLiteral);
  CHECK(r.tokens[5].lexeme == "42");
  CHECK(r.tokens[6].kind == TokenKind::End);
}

TEST_CASE("lexer prefers the longest punctuation and operators") {
  const auto r = tokenize("a.p <-> b.q -> x <= y >= z == w != v < u > t = s");
  REQUIRE(r.ok());
  CHECK(lexemes(r) == std::vector<std::string>{"a", ".", "p", "<->", "b", ".", "q", "->", "x", "<=", "y", ">=", "z",
                                               "==", "w", "!=", "v", "<", "u", ">", "t", "=", "s"});
}

TEST_CASE("lexer skips comments and whitespace and tracks lines") {
  const auto r = tokenize("// header\n  thing // trailing\n\tA");
  REQUIRE(r.ok());
  REQUIRE(r.tokens.size() == 3);
  CHECK(r.tokens[0].line == 2);
  CHECK(r.tokens[0].col == 3);
  CHECK(r.tokens[1].line == 3);
  CHECK(r.tokens[1].col == 2);
}

TEST_CASE("literals: booleans, reals with exponents and strings") {
  const auto r = tokenize("true false 1.5 2e3 7.25e-2 \"a\\\"b\"");
  REQUIRE(r.ok());
  CHECK(r.tokens[0].kind == TokenKind::BoolLiteral);
  CHECK(r.tokens[1].kind == TokenKind::BoolLiteral);
  CHECK(r.tokens[2].kind == TokenKind::RealLiteral);
  CHECK(r.tokens[3].kind == TokenKind::RealLiteral);
  CHECK(r.tokens[4].kind == TokenKind::RealLiteral);
  CHECK(r.tokens[4].lexeme == "7.25e-2");
  CHECK(r.tokens[5].kind == TokenKind::StringLiteral);
  CHECK(unescape_string(r.tokens[5].lexeme) == "a\"b");
}

TEST_CASE("string escapes decode") {
  CHECK(unescape_string(R"("x\ny\tz\r\\\"")") == "x\ny\tz\r\\\"");
  CHECK(unescape_string(R"("\q")") == "\\q");
  CHECK(unescape_string(R"("")").empty());
}

TEST_CASE("keywords are sorted, unique and exclude boolean literals") {
  const auto ks = keywords();
  CHECK(std::is_sorted(ks.begin(), ks.end()));
  CHECK(std::adjacent_find(ks.begin(), ks.end()) == ks.end());
  CHECK(is_keyword("thing"));
  CHECK(is_keyword("da_observe"));
  CHECK_FALSE(is_keyword("true"));
  CHECK_FALSE(is_keyword("Thing"));
}

TEST_CASE("LEX001 reports an unknown character at its column") {
  const auto r = tokenize("x = 1 # 2");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].code == "LEX001");
  CHECK(r.diagnostics[0].line == 1);
  CHECK(r.diagnostics[0].col == 7);
}

TEST_CASE("columns count code points, not bytes") {
  const auto r = tokenize("\"é✓\" @");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].col == 6);
}

TEST_CASE("non-ASCII outside strings is one LEX001 per character") {
  const auto r = tokenize("a ✓ b");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].message.find("✓") != std::string::npos);
  CHECK(lexemes(r) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("LEX002 for a string cut by a newline or end of input") {
  const auto a = tokenize("print \"abc\nx");
  REQUIRE(a.diagnostics.size() == 1);
  CHECK(a.diagnostics[0].code == "LEX002");
  CHECK(a.diagnostics[0].col == 7);
  const auto b = tokenize("\"abc\\");
  REQUIRE(b.diagnostics.size() == 1);
  CHECK(b.diagnostics[0].code == "LEX002");
}

TEST_CASE("LEX003 for numeric literals outside the representable range") {
  CHECK(tokenize("9223372036854775807").ok());
  const auto r = tokenize("9223372036854775808 1e999");
  REQUIRE(r.diagnostics.size() == 2);
  CHECK(r.diagnostics[0].code == "LEX003");
  CHECK(r.diagnostics[1].code == "LEX003");
  CHECK(r.diagnostics[1].col == 21);
}

TEST_CASE("every lexical error is reported, not only the first") {
  const auto r = tokenize("@ # $\n\"open");
  CHECK(codes(r.diagnostics) == std::vector<std::string>{"LEX001", "LEX001", "LEX001", "LEX002"});
}

TEST_CASE("property: tokenize is total, deterministic and keeps positions inside the source") {
  std::mt19937 rng(1234);
  const std::string alphabet = "abcXYZ_019 .,:;(){}!?<>=-+*/\"\\\n\t@#é";
  for (int iter = 0; iter < 500; ++iter) {
    std::string s;
    const int len = static_cast<int>(rng() % 60);
    for (int i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
    const auto a = tokenize(s);
    const auto b = tokenize(s);
    REQUIRE(lexemes(a) == lexemes(b));
    REQUIRE(a.diagnostics == b.diagnostics);
    REQUIRE(a.tokens.back().kind == TokenKind::End);
    const int lines = 1 + static_cast<int>(std::count(s.begin(), s.end(), '\n'));
    for (const auto& d : a.diagnostics) {
      CHECK(d.line >= 1);
      CHECK(d.line <= lines);
      CHECK(d.col >= 1);
    }
    for (const auto& t : a.tokens) {
      if (t.kind == TokenKind::End) continue;
      CHECK(s.compare(t.offset, t.lexeme.size(), t.lexeme) == 0);
    }
  }
}
