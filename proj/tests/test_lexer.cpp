#include <catch2/catch_amalgamated.hpp>

#include "cddlint/lexer.hpp"
#include "support/property_suites.hpp"

using namespace cddlint;

namespace {

std::vector<Token> sig_tokens(const LexResult& lex) {
  std::vector<Token> out;
  for (const Token& t : lex.tokens)
    if (t.significant()) out.push_back(t);
  return out;
}

std::vector<TokenKind> kinds_of(const std::string& src) {
  std::vector<TokenKind> out;
  for (const Token& t : sig_tokens(tokenize(src, "t.dart"))) out.push_back(t.kind);
  return out;
}

}  // namespace

TEST_CASE("if-null operator lexes as one token", "[lexer]") {
  auto toks = sig_tokens(tokenize("a ?? b", "t.dart"));
  REQUIRE(toks.size() == 3);
  CHECK(toks[0].kind == TokenKind::Ident);
  CHECK(toks[0].lexeme == "a");
  CHECK(toks[1].kind == TokenKind::IfNull);
  CHECK(toks[2].lexeme == "b");
}

TEST_CASE("lone question marks disambiguate by context", "[lexer]") {
  // Hand-tokenization oracle: `int?` is a nullable type, `c ?` a conditional.
  auto toks = sig_tokens(tokenize("int? x = c ? 1 : 2;", "t.dart"));
  std::vector<TokenKind> qs;
  for (const Token& t : toks)
    if (t.lexeme == "?") qs.push_back(t.kind);
  REQUIRE(qs.size() == 2);
  CHECK(qs[0] == TokenKind::NullableMark);
  CHECK(qs[1] == TokenKind::Question);
}

TEST_CASE("ternary with identifier branches stays conditional", "[lexer]") {
  auto toks = sig_tokens(tokenize("a ? b : c", "t.dart"));
  REQUIRE(toks.size() == 5);
  CHECK(toks[1].kind == TokenKind::Question);
}

TEST_CASE("nullable declarations keep the marker", "[lexer]") {
  SECTION("simple field") {
    auto toks = sig_tokens(tokenize("String? name;", "t.dart"));
    CHECK(toks[1].kind == TokenKind::NullableMark);
  }
  SECTION("nullable return type on a declaration") {
    auto toks = sig_tokens(tokenize("String? lookup(String k) { return null; }", "t.dart"));
    CHECK(toks[1].kind == TokenKind::NullableMark);
  }
  SECTION("call in a conditional branch") {
    auto toks = sig_tokens(tokenize("x = a ? b(1) : c;", "t.dart"));
    bool found = false;
    for (const Token& t : toks)
      if (t.lexeme == "?") {
        found = true;
        CHECK(t.kind == TokenKind::Question);
      }
    CHECK(found);
  }
  SECTION("nullable generic closer") {
    auto toks = sig_tokens(tokenize("List<List<int>>? xs;", "t.dart"));
    std::vector<TokenKind> qs;
    for (const Token& t : toks)
      if (t.lexeme == "?") qs.push_back(t.kind);
    REQUIRE(qs.size() == 1);
    CHECK(qs[0] == TokenKind::NullableMark);
  }
  SECTION("indexing then ternary") {
    auto toks = sig_tokens(tokenize("f(a[i] ? b : c)", "t.dart"));
    for (const Token& t : toks)
      if (t.lexeme == "?") CHECK(t.kind == TokenKind::Question);
  }
}

TEST_CASE("null-aware family", "[lexer]") {
  auto kinds = kinds_of("a?.b ?? c ?\?= d?..e");
  int null_aware = 0, if_null = 0, if_null_assign = 0;
  for (TokenKind k : kinds) {
    if (k == TokenKind::NullAwareDot) ++null_aware;
    if (k == TokenKind::IfNull) ++if_null;
    if (k == TokenKind::IfNullAssign) ++if_null_assign;
  }
  CHECK(null_aware == 2);
  CHECK(if_null == 1);
  CHECK(if_null_assign == 1);
}

TEST_CASE("interpolation holes", "[lexer]") {
  SECTION("expression hole spans the balanced inside") {
    std::string src = "\"v=${m['k']}\"";
    auto lex = tokenize(src, "t.dart");
    REQUIRE(lex.tokens.size() == 1);
    const Token& s = lex.tokens[0];
    REQUIRE(s.kind == TokenKind::String);
    REQUIRE(s.interpolation_holes.size() == 1);
    const SourceSpan& h = s.interpolation_holes[0];
    CHECK(src.substr(h.byte_start, h.byte_end - h.byte_start) == "m['k']");
  }
  SECTION("simple identifier hole") {
    std::string src = "'hi $name!'";
    auto lex = tokenize(src, "t.dart");
    REQUIRE(lex.tokens.size() == 1);
    REQUIRE(lex.tokens[0].interpolation_holes.size() == 1);
    const SourceSpan& h = lex.tokens[0].interpolation_holes[0];
    CHECK(src.substr(h.byte_start, h.byte_end - h.byte_start) == "name");
  }
  SECTION("escaped dollar is not a hole") {
    auto lex = tokenize("'cost: \\$5'", "t.dart");
    REQUIRE(lex.tokens.size() == 1);
    CHECK(lex.tokens[0].interpolation_holes.empty());
  }
  SECTION("raw strings never have holes") {
    auto lex = tokenize("r'${x}'", "t.dart");
    REQUIRE(lex.tokens.size() == 1);
    CHECK(lex.tokens[0].kind == TokenKind::String);
    CHECK(lex.tokens[0].interpolation_holes.empty());
  }
  SECTION("triple-quoted multi-line string with hole") {
    std::string src = "'''line1\n${a + b}\n'''";
    auto lex = tokenize(src, "t.dart");
    REQUIRE(lex.tokens.size() == 1);
    REQUIRE(lex.tokens[0].interpolation_holes.size() == 1);
    CHECK(lex.tokens[0].span.line_start == 1);
    CHECK(lex.tokens[0].span.line_end == 3);
  }
  SECTION("nested interpolation") {
    std::string src = "'${f('${g}')}'";
    auto lex = tokenize(src, "t.dart");
    REQUIRE(!lex.failed);
    REQUIRE(lex.tokens.size() == 1);
    REQUIRE(lex.tokens[0].interpolation_holes.size() == 1);
    const SourceSpan& h = lex.tokens[0].interpolation_holes[0];
    CHECK(src.substr(h.byte_start, h.byte_end - h.byte_start) == "f('${g}')");
  }
}

TEST_CASE("nested block comments form one token", "[lexer]") {
  auto lex = tokenize("/* a /* b */ c */", "t.dart");
  REQUIRE(lex.tokens.size() == 1);
  CHECK(lex.tokens[0].kind == TokenKind::Comment);
  CHECK(lex.tokens[0].lexeme == "/* a /* b */ c */");
  CHECK(!lex.failed);
}

TEST_CASE("unterminated constructs fail the file but stay lossless", "[lexer]") {
  SECTION("string") {
    auto lex = tokenize("var s = 'abc", "t.dart");
    CHECK(lex.failed);
    REQUIRE(!lex.tokens.empty());
    CHECK(lex.tokens.back().kind == TokenKind::Error);
    CHECK(!cddtest::check_lexer_invariants("var s = 'abc").has_value());
  }
  SECTION("block comment") {
    auto lex = tokenize("int x; /* open", "t.dart");
    CHECK(lex.failed);
    CHECK(lex.tokens.back().kind == TokenKind::Error);
  }
  SECTION("newline terminates a single-quoted string") {
    auto lex = tokenize("var s = 'a\nb';", "t.dart");
    CHECK(lex.failed);
  }
}

TEST_CASE("operator edge cases", "[lexer]") {
  SECTION("spread and null-spread are single tokens") {
    auto toks = sig_tokens(tokenize("[...?items, ...rest]", "t.dart"));
    int spreads = 0;
    for (const Token& t : toks)
      if (t.lexeme == "...?" || t.lexeme == "...") ++spreads;
    CHECK(spreads == 2);
  }
  SECTION("greater-than never fuses") {
    auto toks = sig_tokens(tokenize("Map<String, List<int>> m;", "t.dart"));
    int singles = 0;
    for (const Token& t : toks)
      if (t.lexeme == ">") ++singles;
    CHECK(singles == 2);
  }
  SECTION("number member access is not a fraction") {
    auto toks = sig_tokens(tokenize("1.toString()", "t.dart"));
    REQUIRE(toks.size() >= 3);
    CHECK(toks[0].kind == TokenKind::Number);
    CHECK(toks[0].lexeme == "1");
    CHECK(toks[1].kind == TokenKind::Dot);
  }
  SECTION("numeric literals") {
    auto toks = sig_tokens(tokenize("0x1F 1_000 2.5e-2 1e3", "t.dart"));
    REQUIRE(toks.size() == 4);
    for (const Token& t : toks) CHECK(t.kind == TokenKind::Number);
  }
  SECTION("arrow token") {
    auto toks = sig_tokens(tokenize("f() => 1;", "t.dart"));
    bool arrow = false;
    for (const Token& t : toks)
      if (t.kind == TokenKind::Arrow) arrow = true;
    CHECK(arrow);
  }
}

TEST_CASE("keywords versus identifiers", "[lexer]") {
  auto toks = sig_tokens(tokenize("class if mixin async Future", "t.dart"));
  REQUIRE(toks.size() == 5);
  CHECK(toks[0].kind == TokenKind::Keyword);
  CHECK(toks[1].kind == TokenKind::Keyword);
  CHECK(toks[2].kind == TokenKind::Ident);  // contextual
  CHECK(toks[3].kind == TokenKind::Ident);
  CHECK(toks[4].kind == TokenKind::Ident);
}

TEST_CASE("lossless invariants on fixed samples", "[lexer]") {
  const std::string samples[] = {
      "class A { int? x = c ? 1 : 2; }\n",
      "final s = 'a ${b ? 'y' : \"n\"} c';\n",
      "/* x /* y */ z */ var v = 1; // tail\n",
      "r'''raw ${not a hole}''' '''real ${hole}'''",
      "a?.b ?? c ?\?= d; list[...?x];\n",
      "",
      "   \n\t  ",
  };
  for (const std::string& s : samples) {
    auto fail = cddtest::check_lexer_invariants(s);
    INFO(s);
    CHECK(!fail.has_value());
  }
}

TEST_CASE("random round-trip property (smoke)", "[lexer][property]") {
  auto failures = cddtest::prop_lexer_roundtrip(300, 20260809);
  for (const auto& f : failures) INFO(f);
  CHECK(failures.empty());
}
