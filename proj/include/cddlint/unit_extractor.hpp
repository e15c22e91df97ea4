#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "cddlint/token.hpp"

namespace cddlint {

enum class UnitKind { Class, Mixin, Extension, Enum, TopLevel };

inline const char* unit_kind_name(UnitKind k) {
  switch (k) {
    case UnitKind::Class: return "class";
    case UnitKind::Mixin: return "mixin";
    case UnitKind::Extension: return "extension";
    case UnitKind::Enum: return "enum";
    case UnitKind::TopLevel: return "toplevel";
  }
  return "?";
}

enum class MemberKind { Method, Getter, Setter, Constructor, Field };

inline const char* member_kind_name(MemberKind k) {
  switch (k) {
    case MemberKind::Method: return "method";
    case MemberKind::Getter: return "getter";
    case MemberKind::Setter: return "setter";
    case MemberKind::Constructor: return "constructor";
    case MemberKind::Field: return "field";
  }
  return "?";
}

struct MemberSpan {
  std::string name;
  MemberKind kind = MemberKind::Field;
  SourceSpan span;
};

/// One code unit: a class/mixin/extension/enum declaration, or the synthetic
/// `<toplevel>` group holding a file's remaining top-level declarations.
struct CodeUnit {
  std::string name;
  UnitKind kind = UnitKind::Class;
  SourceSpan decl_span;  // keyword (incl. modifiers/metadata) through closing brace
  SourceSpan body_span;  // inside the braces; empty for `class A = B with M;`
  std::vector<MemberSpan> members;
  int loc = 0;

  /// Token index ranges [begin, end) into the file stream that belong to this
  /// unit. Class-like units have one range; `<toplevel>` may have several
  /// (code before, between and after class declarations).
  struct TokenRange {
    std::size_t begin = 0;
    std::size_t end = 0;
  };
  std::vector<TokenRange> token_ranges;
  /// Byte segments matching token_ranges; decl_span is their hull.
  std::vector<SourceSpan> segments;
};

struct ExtractResult {
  std::vector<CodeUnit> units;
  bool structure_failed = false;  // unbalanced braces; no units emitted
};

namespace detail {

class UnitExtractor {
 public:
  explicit UnitExtractor(const std::vector<Token>& tokens) : toks_(tokens) {
    for (std::size_t i = 0; i < toks_.size(); ++i)
      if (toks_[i].significant()) sig_.push_back(i);
  }

  ExtractResult run() {
    ExtractResult result;
    if (has_error_token()) return result;  // lex-failed file: no units
    if (!braces_balanced()) {
      result.structure_failed = true;
      return result;
    }

    std::vector<bool> claimed(sig_.size(), false);
    std::size_t si = 0;
    while (si < sig_.size()) {
      std::optional<CodeUnit> unit = try_unit_at(si);
      if (unit) {
        std::size_t first = unit->token_ranges.front().begin;
        std::size_t last = unit->token_ranges.front().end;
        for (std::size_t k = 0; k < sig_.size(); ++k)
          if (sig_[k] >= first && sig_[k] < last) claimed[k] = true;
        while (si < sig_.size() && sig_[si] < last) ++si;
        result.units.push_back(std::move(*unit));
        continue;
      }
      ++si;
    }

    collect_toplevel(claimed, result.units);
    std::sort(result.units.begin(), result.units.end(), [](const CodeUnit& a, const CodeUnit& b) {
      return a.decl_span.byte_start < b.decl_span.byte_start;
    });
    return result;
  }

 private:
  const std::vector<Token>& toks_;
  std::vector<std::size_t> sig_;  // indices of significant tokens

  const Token& sig(std::size_t k) const { return toks_[sig_[k]]; }

  bool has_error_token() const {
    for (const Token& t : toks_)
      if (t.kind == TokenKind::Error) return true;
    return false;
  }

  bool braces_balanced() const {
    long depth = 0;
    for (std::size_t k = 0; k < sig_.size(); ++k) {
      if (sig(k).kind == TokenKind::LBrace) ++depth;
      if (sig(k).kind == TokenKind::RBrace && --depth < 0) return false;
    }
    return depth == 0;
  }

  static bool is_decl_modifier(const Token& t) {
    static const std::unordered_set<std::string_view> kMods = {"abstract", "base", "final",
                                                               "sealed", "interface"};
    return kMods.count(t.lexeme) > 0;
  }

  // Walks back over modifiers and `@metadata` so they land inside decl_span
  // instead of leaking into the synthetic toplevel unit.
  std::size_t back_over_prefix(std::size_t head) const {
    std::size_t k = head;
    while (k > 0 && is_decl_modifier(sig(k - 1))) --k;
    while (k > 0) {
      std::size_t j = k - 1;
      if (sig(j).kind == TokenKind::RParen) {
        int depth = 0;
        std::size_t i = j;
        while (true) {
          if (sig(i).kind == TokenKind::RParen) ++depth;
          if (sig(i).kind == TokenKind::LParen && --depth == 0) break;
          if (i == 0) return k;
          --i;
        }
        if (i == 0) return k;
        j = i - 1;
      }
      if (sig(j).kind != TokenKind::Ident) return k;
      while (j >= 2 && sig(j - 1).kind == TokenKind::Dot && sig(j - 2).kind == TokenKind::Ident)
        j -= 2;
      if (j == 0 || sig(j - 1).kind != TokenKind::At) return k;
      k = j - 1;
      while (k > 0 && is_decl_modifier(sig(k - 1))) --k;
    }
    return k;
  }

  std::optional<CodeUnit> try_unit_at(std::size_t si) {
    const Token& t = sig(si);
    UnitKind kind;
    std::size_t name_si = si + 1;
    bool requires_body = false;

    if (t.is_lexeme("class")) {
      kind = UnitKind::Class;
    } else if (t.is_lexeme("enum")) {
      kind = UnitKind::Enum;
      requires_body = true;
    } else if (t.is_lexeme("mixin")) {
      if (si + 1 < sig_.size() && sig(si + 1).is_lexeme("class")) {
        kind = UnitKind::Class;
        name_si = si + 2;
      } else if (si + 1 < sig_.size() && sig(si + 1).kind == TokenKind::Ident) {
        kind = UnitKind::Mixin;
        requires_body = true;
      } else {
        return std::nullopt;
      }
    } else if (t.is_lexeme("extension")) {
      if (si + 1 >= sig_.size()) return std::nullopt;
      const Token& n = sig(si + 1);
      if (n.kind != TokenKind::Ident) return std::nullopt;
      kind = UnitKind::Extension;
      requires_body = true;
      if (n.is_lexeme("type")) name_si = si + 2;
    } else {
      return std::nullopt;
    }

    // Header: to the body `{` or a terminating `;` at group depth zero.
    long paren = 0, bracket = 0;
    std::size_t body_open = sig_.size();
    std::size_t end_si = sig_.size();
    bool has_body = false;
    for (std::size_t k = si + 1; k < sig_.size(); ++k) {
      const Token& h = sig(k);
      if (h.kind == TokenKind::LParen) ++paren;
      if (h.kind == TokenKind::RParen) --paren;
      if (h.kind == TokenKind::LBracket) ++bracket;
      if (h.kind == TokenKind::RBracket) --bracket;
      if (paren == 0 && bracket == 0) {
        if (h.kind == TokenKind::LBrace) {
          body_open = k;
          has_body = true;
          break;
        }
        if (h.kind == TokenKind::Semicolon) {
          end_si = k;
          break;
        }
      }
    }
    if (!has_body && end_si == sig_.size()) return std::nullopt;  // ran off the file
    if (!has_body && requires_body) return std::nullopt;  // e.g. `mixin x = ...;` is no declaration

    std::size_t close = body_open;
    if (has_body) {
      long depth = 0;
      for (close = body_open; close < sig_.size(); ++close) {
        if (sig(close).kind == TokenKind::LBrace) ++depth;
        if (sig(close).kind == TokenKind::RBrace && --depth == 0) break;
      }
      if (close >= sig_.size()) return std::nullopt;
      end_si = close;
    }

    CodeUnit unit;
    unit.kind = kind;
    std::size_t start_si = back_over_prefix(si);
    const Token& first = sig(start_si);
    const Token& last = sig(end_si);
    unit.decl_span = SourceSpan{first.span.file_path, first.span.byte_start, last.span.byte_end,
                                first.span.line_start, last.span.line_end};
    if (has_body) {
      const Token& open = sig(body_open);
      unit.body_span = SourceSpan{open.span.file_path, open.span.byte_end, last.span.byte_start,
                                  open.span.line_end, last.span.line_start};
    } else {
      unit.body_span = SourceSpan{last.span.file_path, last.span.byte_start, last.span.byte_start,
                                  last.span.line_start, last.span.line_start};
    }
    unit.token_ranges.push_back({sig_[start_si], sig_[end_si] + 1});
    unit.segments.push_back(unit.decl_span);

    if (name_si < sig_.size() && sig(name_si).kind == TokenKind::Ident &&
        !sig(name_si).is_lexeme("on")) {
      unit.name = sig(name_si).lexeme;
    } else {
      unit.name = "<extension@" + std::to_string(t.span.line_start) + ">";
    }

    if (has_body && close > body_open + 1)
      unit.members = parse_members(body_open + 1, close, unit.name, kind == UnitKind::Enum);
    return unit;
  }

  bool is_directive_at(std::size_t k) const {
    const Token& t = sig(k);
    if (t.kind != TokenKind::Ident) return false;
    const Token* next = k + 1 < sig_.size() ? &sig(k + 1) : nullptr;
    if (!next) return false;
    if ((t.is_lexeme("import") || t.is_lexeme("export")) && next->kind == TokenKind::String)
      return true;
    if (t.is_lexeme("part") && (next->kind == TokenKind::String || next->is_lexeme("of")))
      return true;
    if (t.is_lexeme("library") && next->kind == TokenKind::Ident) return true;
    return false;
  }

  void collect_toplevel(const std::vector<bool>& claimed, std::vector<CodeUnit>& units) {
    // Remaining top-level declarations become one synthetic unit so no code
    // escapes scoring. Directives (import/export/library/part) are not
    // declarations and are skipped.
    std::vector<std::size_t> leftover;
    std::size_t k = 0;
    while (k < sig_.size()) {
      if (claimed[k]) {
        ++k;
        continue;
      }
      if (is_directive_at(k)) {
        while (k < sig_.size() && sig(k).kind != TokenKind::Semicolon) ++k;
        ++k;
        continue;
      }
      leftover.push_back(k);
      ++k;
    }
    if (leftover.empty()) return;

    CodeUnit unit;
    unit.kind = UnitKind::TopLevel;
    unit.name = "<toplevel>";
    std::size_t run_start = leftover[0];
    std::size_t prev = leftover[0];
    auto flush = [&](std::size_t from, std::size_t to) {
      const Token& a = sig(from);
      const Token& b = sig(to);
      unit.segments.push_back(SourceSpan{a.span.file_path, a.span.byte_start, b.span.byte_end,
                                         a.span.line_start, b.span.line_end});
      unit.token_ranges.push_back({sig_[from], sig_[to] + 1});
      auto members = parse_members(from, to + 1, unit.name, false);
      unit.members.insert(unit.members.end(), members.begin(), members.end());
    };
    for (std::size_t idx = 1; idx < leftover.size(); ++idx) {
      if (leftover[idx] != prev + 1) {
        flush(run_start, prev);
        run_start = leftover[idx];
      }
      prev = leftover[idx];
    }
    flush(run_start, prev);

    const SourceSpan& first = unit.segments.front();
    const SourceSpan& last = unit.segments.back();
    unit.decl_span = SourceSpan{first.file_path, first.byte_start, last.byte_end, first.line_start,
                                last.line_end};
    unit.body_span = unit.decl_span;
    units.push_back(std::move(unit));
  }

  // ---- member slicing ----------------------------------------------------
  //
  // Heuristic split of a class body (or toplevel segment) into field /
  // method / getter / setter / constructor spans. Token-level only; used by
  // coupling's field-type rule and by the split advisor.

  std::vector<MemberSpan> parse_members(std::size_t from_si, std::size_t to_si,
                                        const std::string& unit_name, bool is_enum) {
    std::vector<MemberSpan> members;
    std::size_t k = from_si;
    if (is_enum) {
      // Enum values up to the first `;` are unit text, not members.
      std::size_t v = k;
      long depth = 0;
      bool found = false;
      for (; v < to_si; ++v) {
        if (sig(v).kind == TokenKind::LBrace || sig(v).kind == TokenKind::LParen) ++depth;
        if (sig(v).kind == TokenKind::RBrace || sig(v).kind == TokenKind::RParen) --depth;
        if (depth == 0 && sig(v).kind == TokenKind::Semicolon) {
          found = true;
          break;
        }
      }
      if (!found) return members;
      k = v + 1;
    }

    while (k < to_si) {
      const std::size_t start = k;
      bool has_get = false, has_set = false, is_factory = false, has_operator = false;
      bool seen_assign = false, colon_before_assign = false;
      bool saw_paren = false;
      std::size_t first_paren = 0;
      long paren = 0, bracket = 0, brace = 0;
      std::size_t end = to_si - 1;

      std::size_t i = k;
      for (; i < to_si; ++i) {
        const Token& t = sig(i);
        if (paren == 0 && bracket == 0 && brace == 0) {
          if (t.kind == TokenKind::Semicolon) {
            end = i;
            break;
          }
          if (t.kind == TokenKind::LBrace) {
            bool in_initializer = seen_assign && !colon_before_assign;
            bool ctor_init = colon_before_assign && saw_paren;
            if (!in_initializer && opens_body(i, start, has_get, ctor_init)) {
              long depth = 0;
              std::size_t j = i;
              for (; j < to_si; ++j) {
                if (sig(j).kind == TokenKind::LBrace) ++depth;
                if (sig(j).kind == TokenKind::RBrace && --depth == 0) break;
              }
              end = j < to_si ? j : to_si - 1;
              break;
            }
            ++brace;
            continue;
          }
          if (t.is_lexeme("=")) seen_assign = true;
          if (t.kind == TokenKind::Colon && !seen_assign) colon_before_assign = true;
          if (!seen_assign && t.kind == TokenKind::Ident && !saw_paren) {
            bool after_dot = i > start && sig(i - 1).kind == TokenKind::Dot;
            if (t.is_lexeme("get") && !after_dot) has_get = true;
            if (t.is_lexeme("set") && !after_dot) has_set = true;
            if (t.is_lexeme("factory") && !after_dot) is_factory = true;
            if (t.is_lexeme("operator") && !after_dot) has_operator = true;
          }
          if (!seen_assign && t.kind == TokenKind::LParen && !saw_paren) {
            saw_paren = true;
            first_paren = i;
          }
        }
        if (t.kind == TokenKind::LParen) ++paren;
        if (t.kind == TokenKind::RParen) --paren;
        if (t.kind == TokenKind::LBracket) ++bracket;
        if (t.kind == TokenKind::RBracket) --bracket;
        if (t.kind == TokenKind::LBrace) ++brace;
        if (t.kind == TokenKind::RBrace) --brace;
      }

      MemberSpan m;
      const Token& a = sig(start);
      const Token& b = sig(end);
      m.span = SourceSpan{a.span.file_path, a.span.byte_start, b.span.byte_end, a.span.line_start,
                          b.span.line_end};
      classify_member(m, start, end, saw_paren, first_paren, has_get, has_set, is_factory,
                      has_operator, unit_name);
      members.push_back(std::move(m));
      k = end + 1;
    }
    return members;
  }

  // A `{` opens an executable body after `)`, after `async`/`sync`
  // generator markers, or after a getter's name; everywhere else it starts
  // a collection literal. Inside a constructor initializer list the body
  // brace can also follow any expression-ending token, since Dart never
  // juxtaposes two expressions.
  bool opens_body(std::size_t i, std::size_t member_start, bool has_get, bool ctor_init) const {
    if (i == member_start) return false;
    const Token& p = sig(i - 1);
    if (p.kind == TokenKind::RParen) return true;
    if (p.is_lexeme("async") || p.is_lexeme("sync")) return true;
    if (p.is_lexeme("*") && i >= member_start + 2) {
      const Token& pp = sig(i - 2);
      if (pp.is_lexeme("async") || pp.is_lexeme("sync")) return true;
    }
    if (has_get && p.kind == TokenKind::Ident) return true;
    if (ctor_init) {
      switch (p.kind) {
        case TokenKind::RBrace:
        case TokenKind::RBracket:
        case TokenKind::Number:
        case TokenKind::String:
          return true;
        case TokenKind::Ident:
          return !p.is_lexeme("const");
        default:
          break;
      }
    }
    return false;
  }

  void classify_member(MemberSpan& m, std::size_t start, std::size_t end, bool saw_paren,
                       std::size_t first_paren, bool has_get, bool has_set, bool is_factory,
                       bool has_operator, const std::string& unit_name) {
    if (has_get) {
      m.kind = MemberKind::Getter;
      for (std::size_t i = start; i < end; ++i)
        if (sig(i).is_lexeme("get") && sig(i + 1).kind == TokenKind::Ident) {
          m.name = sig(i + 1).lexeme;
          break;
        }
      return;
    }
    if (has_set) {
      m.kind = MemberKind::Setter;
      for (std::size_t i = start; i < end; ++i)
        if (sig(i).is_lexeme("set") && sig(i + 1).kind == TokenKind::Ident) {
          m.name = sig(i + 1).lexeme;
          break;
        }
      return;
    }
    if (has_operator) {
      m.kind = MemberKind::Method;
      for (std::size_t i = start; i < end; ++i)
        if (sig(i).is_lexeme("operator")) {
          m.name = "operator" + sig(i + 1).lexeme;
          break;
        }
      return;
    }
    if (saw_paren && first_paren > start) {
      // Name is the identifier before `(`, skipping generic parameters.
      std::size_t n = first_paren - 1;
      if (sig(n).is_lexeme(">")) {
        long depth = 0;
        while (n > start) {
          if (sig(n).is_lexeme(">")) ++depth;
          if (sig(n).is_lexeme("<") && --depth == 0) {
            --n;
            break;
          }
          --n;
        }
      }
      if (sig(n).kind == TokenKind::Ident) {
        m.name = sig(n).lexeme;
        bool named_ctor = n >= start + 2 && sig(n - 1).kind == TokenKind::Dot &&
                          sig(n - 2).kind == TokenKind::Ident && sig(n - 2).lexeme == unit_name;
        if (named_ctor) m.name = unit_name + "." + m.name;
        m.kind = (is_factory || m.name == unit_name || named_ctor) ? MemberKind::Constructor
                                                                   : MemberKind::Method;
        return;
      }
      m.kind = MemberKind::Method;
      return;
    }
    m.kind = MemberKind::Field;
    std::string last_ident;
    for (std::size_t i = start; i <= end; ++i) {
      if (sig(i).is_lexeme("=")) break;
      if (sig(i).kind == TokenKind::Ident) last_ident = sig(i).lexeme;
    }
    m.name = last_ident;
  }
};

}  // namespace detail

/// Partition a token stream into code units. A lex-failed stream (one
/// containing an Error token) yields no units; unbalanced braces mark the
/// file structure-failed.
inline ExtractResult extract_units(const std::vector<Token>& tokens) {
  return detail::UnitExtractor(tokens).run();
}

/// Lines inside the unit that contain at least one non-whitespace,
/// non-comment character (blank and comment-only lines do not count).
inline int count_loc(const CodeUnit& unit, const std::vector<Token>& tokens) {
  std::unordered_set<int> lines;
  for (const auto& range : unit.token_ranges) {
    for (std::size_t i = range.begin; i < range.end && i < tokens.size(); ++i) {
      const Token& t = tokens[i];
      if (!t.significant()) continue;
      for (int line = t.span.line_start; line <= t.span.line_end; ++line) lines.insert(line);
    }
  }
  return static_cast<int>(lines.size());
}

}  // namespace cddlint
