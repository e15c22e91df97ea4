#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cddlint/span.hpp"

namespace cddlint {

enum class TokenKind {
  Ident,
  Keyword,  // reserved words only; contextual keywords (async, mixin, ...) lex as Ident
  String,
  Number,
  Op,
  NullableMark,  // lone `?` in a type position
  Question,      // lone `?` of a conditional expression
  NullAwareDot,  // `?.` and `?..`
  IfNull,        // `??`
  IfNullAssign,  // `??=`
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Semicolon,
  Comma,
  Colon,
  Dot,
  Arrow,  // `=>`
  At,
  Comment,
  Error,
};

inline const char* token_kind_name(TokenKind k) {
  switch (k) {
    case TokenKind::Ident: return "ident";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::String: return "string";
    case TokenKind::Number: return "number";
    case TokenKind::Op: return "op";
    case TokenKind::NullableMark: return "nullable_mark";
    case TokenKind::Question: return "question";
    case TokenKind::NullAwareDot: return "null_aware_dot";
    case TokenKind::IfNull: return "if_null";
    case TokenKind::IfNullAssign: return "if_null_assign";
    case TokenKind::LBrace: return "lbrace";
    case TokenKind::RBrace: return "rbrace";
    case TokenKind::LParen: return "lparen";
    case TokenKind::RParen: return "rparen";
    case TokenKind::LBracket: return "lbracket";
    case TokenKind::RBracket: return "rbracket";
    case TokenKind::Semicolon: return "semicolon";
    case TokenKind::Comma: return "comma";
    case TokenKind::Colon: return "colon";
    case TokenKind::Dot: return "dot";
    case TokenKind::Arrow: return "arrow";
    case TokenKind::At: return "at";
    case TokenKind::Comment: return "comment";
    case TokenKind::Error: return "error";
  }
  return "?";
}

struct Token {
  TokenKind kind = TokenKind::Op;
  std::string lexeme;
  SourceSpan span;
  /// Sub-spans of `${...}` / `$ident` interpolation expressions. String tokens
  /// only; raw strings never carry holes.
  std::vector<SourceSpan> interpolation_holes;

  bool is(TokenKind k) const { return kind == k; }
  bool is_lexeme(std::string_view s) const { return lexeme == s; }
  bool significant() const { return kind != TokenKind::Comment; }
};

}  // namespace cddlint
