#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cddlint/token.hpp"

namespace cddlint {

/// Result of lexing one file (or one interpolation fragment).
///
/// The stream is lossless: token spans never overlap, every byte outside a
/// token span is whitespace, and concatenating the gaps and lexemes in order
/// reproduces the input byte-for-byte. On an unterminated string or block
/// comment the remainder of the input becomes a single Error token and
/// `failed` is set; other files of a multi-file run are unaffected.
struct LexResult {
  std::vector<Token> tokens;
  bool failed = false;
  std::string error;
};

namespace detail {

inline bool is_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}

inline bool is_ident_part(unsigned char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}

inline bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

inline bool is_hex_digit(unsigned char c) {
  return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

inline bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Dart reserved words. Built-in identifiers (async, await, mixin, dynamic, ...)
// intentionally stay Ident so the `?` disambiguation below can treat type names
// uniformly; detectors match on lexemes, not kinds.
inline const std::unordered_set<std::string_view>& reserved_words() {
  static const std::unordered_set<std::string_view> kWords = {
      "assert", "break",   "case",  "catch",   "class", "const",  "continue", "default",
      "do",     "else",    "enum",  "extends", "false", "final",  "finally",  "for",
      "if",     "in",      "is",    "new",     "null",  "rethrow", "return",  "super",
      "switch", "this",    "throw", "true",    "try",   "var",    "void",     "while",
      "with",
  };
  return kWords;
}

class Lexer {
 public:
  Lexer(std::string_view src, std::string file, std::size_t byte_base, int line_base)
      : src_(src), file_(std::move(file)), byte_base_(byte_base), line_(line_base) {}

  LexResult run() {
    while (!at_end() && !failed_) {
      skip_whitespace();
      if (at_end()) break;
      scan_token();
    }
    classify_question_marks();
    return LexResult{std::move(tokens_), failed_, std::move(error_)};
  }

 private:
  std::string_view src_;
  std::string file_;
  std::size_t byte_base_ = 0;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::vector<Token> tokens_;
  bool failed_ = false;
  std::string error_;

  bool at_end() const { return pos_ >= src_.size(); }
  char cur() const { return src_[pos_]; }
  char peek(std::size_t n = 1) const { return pos_ + n < src_.size() ? src_[pos_ + n] : '\0'; }

  void advance() {
    if (src_[pos_] == '\n') ++line_;
    ++pos_;
  }

  void skip_whitespace() {
    while (!at_end() && is_space(static_cast<unsigned char>(cur()))) advance();
  }

  void emit(TokenKind kind, std::size_t start, int start_line,
            std::vector<SourceSpan> holes = {}) {
    Token t;
    t.kind = kind;
    t.lexeme.assign(src_.substr(start, pos_ - start));
    t.span = SourceSpan{file_, byte_base_ + start, byte_base_ + pos_, start_line, line_};
    t.interpolation_holes = std::move(holes);
    tokens_.push_back(std::move(t));
  }

  void fail_rest(std::size_t start, int start_line, std::string why) {
    while (!at_end()) advance();
    emit(TokenKind::Error, start, start_line);
    failed_ = true;
    if (error_.empty()) error_ = std::move(why);
  }

  void scan_token() {
    const std::size_t start = pos_;
    const int start_line = line_;
    const char c = cur();

    if (c == '/' && peek() == '/') {
      while (!at_end() && cur() != '\n') advance();
      emit(TokenKind::Comment, start, start_line);
      return;
    }
    if (c == '/' && peek() == '*') {
      advance();
      advance();
      int depth = 1;  // Dart block comments nest
      while (depth > 0) {
        if (at_end()) {
          fail_rest(start, start_line, "unterminated block comment");
          return;
        }
        if (cur() == '/' && peek() == '*') {
          ++depth;
          advance();
          advance();
        } else if (cur() == '*' && peek() == '/') {
          --depth;
          advance();
          advance();
        } else {
          advance();
        }
      }
      emit(TokenKind::Comment, start, start_line);
      return;
    }
    if (c == '\'' || c == '"') {
      scan_string(start, start_line, /*raw=*/false);
      return;
    }
    if (c == 'r' && (peek() == '\'' || peek() == '"')) {
      advance();  // r
      scan_string(start, start_line, /*raw=*/true);
      return;
    }
    if (is_digit(static_cast<unsigned char>(c))) {
      scan_number(start, start_line);
      return;
    }
    if (is_ident_start(static_cast<unsigned char>(c))) {
      while (!at_end() && is_ident_part(static_cast<unsigned char>(cur()))) advance();
      std::string_view word = src_.substr(start, pos_ - start);
      emit(reserved_words().count(word) ? TokenKind::Keyword : TokenKind::Ident, start,
           start_line);
      return;
    }
    scan_operator(start, start_line);
  }

  // pos_ sits on the opening quote (after `r` for raw strings).
  void scan_string(std::size_t start, int start_line, bool raw) {
    const char quote = cur();
    bool triple = peek(1) == quote && peek(2) == quote;
    advance();
    if (triple) {
      advance();
      advance();
    }
    std::vector<SourceSpan> holes;
    if (!consume_string_body(quote, triple, raw, raw ? nullptr : &holes)) {
      fail_rest(start, start_line, "unterminated string literal");
      return;
    }
    emit(TokenKind::String, start, start_line, std::move(holes));
  }

  // Consumes a string body up to and including the closing quote(s).
  // Returns false when the string is unterminated. `holes` collects
  // interpolation sub-spans when non-null.
  bool consume_string_body(char quote, bool triple, bool raw, std::vector<SourceSpan>* holes) {
    while (true) {
      if (at_end()) return false;
      const char c = cur();
      if (!triple && (c == '\n' || c == '\r')) return false;
      if (c == quote) {
        if (!triple) {
          advance();
          return true;
        }
        if (peek(1) == quote && peek(2) == quote) {
          advance();
          advance();
          advance();
          return true;
        }
        advance();
        continue;
      }
      if (!raw && c == '\\') {
        advance();
        if (!at_end()) advance();
        continue;
      }
      if (!raw && c == '$') {
        if (peek() == '{') {
          advance();  // $
          advance();  // {
          const std::size_t hole_start = pos_;
          const int hole_line = line_;
          if (!consume_interpolation(triple)) return false;
          // pos_ sits on the closing `}` here.
          if (holes) {
            holes->push_back(SourceSpan{file_, byte_base_ + hole_start, byte_base_ + pos_,
                                        hole_line, line_});
          }
          advance();  // }
          continue;
        }
        char n = peek();
        if ((n >= 'a' && n <= 'z') || (n >= 'A' && n <= 'Z') || n == '_') {
          advance();  // $
          const std::size_t hole_start = pos_;
          const int hole_line = line_;
          while (!at_end()) {
            char ic = cur();
            bool ok = (ic >= 'a' && ic <= 'z') || (ic >= 'A' && ic <= 'Z') || ic == '_' ||
                      is_digit(static_cast<unsigned char>(ic));
            if (!ok) break;
            advance();
          }
          if (holes) {
            holes->push_back(SourceSpan{file_, byte_base_ + hole_start, byte_base_ + pos_,
                                        hole_line, line_});
          }
          continue;
        }
        advance();
        continue;
      }
      advance();
    }
  }

  // Scans the inside of `${...}` up to (not including) the balancing `}`.
  // Braces inside nested string literals do not count toward the balance.
  // Newlines are legal here even when the enclosing string is single-line.
  bool consume_interpolation(bool outer_triple) {
    (void)outer_triple;
    int depth = 1;
    while (true) {
      if (at_end()) return false;
      const char c = cur();
      if (c == '{') {
        ++depth;
        advance();
      } else if (c == '}') {
        if (--depth == 0) return true;
        advance();
      } else if (c == '\'' || c == '"') {
        char q = c;
        bool t = peek(1) == q && peek(2) == q;
        advance();
        if (t) {
          advance();
          advance();
        }
        if (!consume_string_body(q, t, /*raw=*/false, nullptr)) return false;
      } else if (c == 'r' && (peek() == '\'' || peek() == '"')) {
        advance();
        char q = cur();
        bool t = peek(1) == q && peek(2) == q;
        advance();
        if (t) {
          advance();
          advance();
        }
        if (!consume_string_body(q, t, /*raw=*/true, nullptr)) return false;
      } else {
        advance();
      }
    }
  }

  void scan_number(std::size_t start, int start_line) {
    if (cur() == '0' && (peek() == 'x' || peek() == 'X')) {
      advance();
      advance();
      while (!at_end() && (is_hex_digit(static_cast<unsigned char>(cur())) || cur() == '_'))
        advance();
      emit(TokenKind::Number, start, start_line);
      return;
    }
    while (!at_end() && (is_digit(static_cast<unsigned char>(cur())) || cur() == '_')) advance();
    if (!at_end() && cur() == '.' && is_digit(static_cast<unsigned char>(peek()))) {
      advance();
      while (!at_end() && (is_digit(static_cast<unsigned char>(cur())) || cur() == '_')) advance();
    }
    if (!at_end() && (cur() == 'e' || cur() == 'E') &&
        (is_digit(static_cast<unsigned char>(peek())) ||
         ((peek() == '+' || peek() == '-') && is_digit(static_cast<unsigned char>(peek(2)))))) {
      advance();
      if (cur() == '+' || cur() == '-') advance();
      while (!at_end() && is_digit(static_cast<unsigned char>(cur()))) advance();
    }
    emit(TokenKind::Number, start, start_line);
  }

  void scan_operator(std::size_t start, int start_line) {
    // `>` never combines into `>>`/`>>=` so that nested generic closers
    // (`List<List<int>>`) stay individual tokens; splitting keeps shifts
    // lossless as two tokens.
    struct OpRule {
      std::string_view text;
      TokenKind kind;
    };
    static constexpr std::array<OpRule, 36> kOps = {{
        {"...?", TokenKind::Op},   {"...", TokenKind::Op},    {"?\?=", TokenKind::IfNullAssign},
        {"?\?", TokenKind::IfNull}, {"?..", TokenKind::NullAwareDot},
        {"?.", TokenKind::NullAwareDot},
        {"?", TokenKind::Question},  // provisional; reclassified below
        {"=>", TokenKind::Arrow},  {"==", TokenKind::Op},     {"!=", TokenKind::Op},
        {"<<=", TokenKind::Op},    {"<<", TokenKind::Op},     {"<=", TokenKind::Op},
        {">=", TokenKind::Op},     {"&&", TokenKind::Op},     {"||", TokenKind::Op},
        {"++", TokenKind::Op},     {"--", TokenKind::Op},     {"+=", TokenKind::Op},
        {"-=", TokenKind::Op},     {"*=", TokenKind::Op},     {"/=", TokenKind::Op},
        {"~/=", TokenKind::Op},    {"~/", TokenKind::Op},     {"%=", TokenKind::Op},
        {"&=", TokenKind::Op},     {"|=", TokenKind::Op},     {"^=", TokenKind::Op},
        {"..", TokenKind::Op},     {"{", TokenKind::LBrace},  {"}", TokenKind::RBrace},
        {"(", TokenKind::LParen},  {")", TokenKind::RParen},  {"[", TokenKind::LBracket},
        {"]", TokenKind::RBracket}, {";", TokenKind::Semicolon},
    }};
    std::string_view rest = src_.substr(pos_);
    for (const auto& rule : kOps) {
      if (rest.substr(0, rule.text.size()) == rule.text) {
        for (std::size_t k = 0; k < rule.text.size(); ++k) advance();
        emit(rule.kind, start, start_line);
        return;
      }
    }
    TokenKind kind = TokenKind::Op;
    switch (cur()) {
      case ',': kind = TokenKind::Comma; break;
      case ':': kind = TokenKind::Colon; break;
      case '.': kind = TokenKind::Dot; break;
      case '@': kind = TokenKind::At; break;
      default: break;
    }
    advance();
    emit(kind, start, start_line);
  }

  // ---- lone `?` disambiguation ------------------------------------------
  //
  // `??=`, `??`, `?.`, `?..` are resolved during scanning. A lone `?` is a
  // nullable-type marker when the previous significant token is an
  // identifier, `>`, `]` or `)` and what follows reads like the tail of a
  // type annotation; otherwise it is the `?` of a conditional expression.
  // Purely token-level: accuracy is pinned by the fixture corpus.

  const Token* sig_at(const std::vector<int>& sig, int i) const {
    if (i < 0 || i >= static_cast<int>(sig.size())) return nullptr;
    return &tokens_[sig[i]];
  }

  void classify_question_marks() {
    std::vector<int> sig;
    sig.reserve(tokens_.size());
    for (int i = 0; i < static_cast<int>(tokens_.size()); ++i)
      if (tokens_[i].significant()) sig.push_back(i);

    for (int si = 0; si < static_cast<int>(sig.size()); ++si) {
      Token& tok = tokens_[sig[si]];
      if (tok.kind != TokenKind::Question || tok.lexeme != "?") continue;
      if (is_nullable_mark(sig, si)) tok.kind = TokenKind::NullableMark;
    }
  }

  bool is_nullable_mark(const std::vector<int>& sig, int si) const {
    const Token* prev = sig_at(sig, si - 1);
    const Token* next = sig_at(sig, si + 1);
    if (!prev || !next) return false;
    bool prev_ok = prev->kind == TokenKind::Ident || prev->is_lexeme(">") ||
                   prev->kind == TokenKind::RBracket || prev->kind == TokenKind::RParen;
    if (!prev_ok) return false;

    switch (next->kind) {
      case TokenKind::Comma:
      case TokenKind::RParen:
      case TokenKind::LBrace:
      case TokenKind::Semicolon:
        return true;
      default:
        break;
    }
    if (next->is_lexeme(">") || next->is_lexeme("=")) return true;
    if (next->kind != TokenKind::Ident) return false;
    // `T? name ...`: a following identifier is only a declared name when the
    // token after it still reads like a declaration; `cond ? name : other`
    // and `cond ? name + 1 : other` must stay conditional.
    if (next->is_lexeme("Function")) return true;  // `int? Function() f`
    const Token* after = sig_at(sig, si + 2);
    if (!after) return true;
    switch (after->kind) {
      case TokenKind::Semicolon:
      case TokenKind::Comma:
      case TokenKind::RParen:
      case TokenKind::RBracket:
      case TokenKind::RBrace:
        return true;
      case TokenKind::LParen:
        return paren_group_opens_body(sig, si + 2);
      default:
        break;
    }
    if (after->is_lexeme("=") || after->is_lexeme("in")) return true;
    return false;
  }

  // For `T? name ( ... )`, decide between a function declaration with a
  // nullable return type and a conditional whose then-branch is a call.
  bool paren_group_opens_body(const std::vector<int>& sig, int open_si) const {
    int depth = 0;
    int limit = open_si + 256;
    for (int i = open_si; i < static_cast<int>(sig.size()) && i < limit; ++i) {
      const Token* t = sig_at(sig, i);
      if (t->kind == TokenKind::LParen) ++depth;
      if (t->kind == TokenKind::RParen && --depth == 0) {
        const Token* after = sig_at(sig, i + 1);
        if (!after) return false;
        return after->kind == TokenKind::LBrace || after->kind == TokenKind::Arrow ||
               after->is_lexeme("async") || after->is_lexeme("sync");
      }
    }
    return false;
  }
};

}  // namespace detail

/// Lex a whole Dart source file.
inline LexResult tokenize(std::string_view source, std::string file_path) {
  return detail::Lexer(source, std::move(file_path), 0, 1).run();
}

/// Lex a fragment (an interpolation hole) so spans stay file-absolute.
inline LexResult tokenize_fragment(std::string_view fragment, std::string file_path,
                                   std::size_t byte_offset, int line_offset) {
  return detail::Lexer(fragment, std::move(file_path), byte_offset, line_offset).run();
}

}  // namespace cddlint
