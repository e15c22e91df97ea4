#pragma once

#include <algorithm>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cddlint/icp_config.hpp"
#include "cddlint/lexer.hpp"
#include "cddlint/unit_extractor.hpp"

namespace cddlint {

/// One detected complexity element inside a code unit.
struct IcpFinding {
  CategoryId category = CategoryId::BranchesLoops;
  std::string subitem = "default";
  SourceSpan span;
  const CodeUnit* unit = nullptr;
  int member_index = -1;  // index into unit->members, -1 for class-level findings
};

/// File-level facts shared by all unit detectors.
struct FileContext {
  std::vector<std::string> imports;          // import URIs as written
  std::set<std::string> known_functions;     // function/method names declared in this file
};

/// The token streams of one unit: stream 0 holds the unit's own tokens,
/// further streams hold recursively re-lexed interpolation holes so that
/// elements inside `${...}` are counted too.
struct UnitStreams {
  std::vector<std::vector<Token>> streams;
};

namespace detail {

inline void collect_hole_streams(const std::vector<Token>& tokens, UnitStreams& out, int depth) {
  if (depth <= 0) return;
  for (const Token& t : tokens) {
    if (t.kind != TokenKind::String) continue;
    for (const SourceSpan& hole : t.interpolation_holes) {
      std::size_t rel = hole.byte_start - t.span.byte_start;
      std::string_view text = std::string_view(t.lexeme).substr(rel, hole.length());
      LexResult lexed = tokenize_fragment(text, hole.file_path, hole.byte_start, hole.line_start);
      if (!lexed.tokens.empty()) {
        out.streams.push_back(std::move(lexed.tokens));
        collect_hole_streams(out.streams.back(), out, depth - 1);
      }
    }
  }
}

}  // namespace detail

inline UnitStreams build_unit_streams(const CodeUnit& unit, const std::vector<Token>& file_tokens,
                                      int max_hole_depth = 16) {
  UnitStreams out;
  std::vector<Token> main;
  for (const auto& range : unit.token_ranges)
    for (std::size_t i = range.begin; i < range.end && i < file_tokens.size(); ++i)
      main.push_back(file_tokens[i]);
  out.streams.push_back(std::move(main));
  detail::collect_hole_streams(out.streams[0], out, max_hole_depth);
  return out;
}

inline FileContext build_file_context(const std::vector<Token>& file_tokens,
                                      const std::vector<CodeUnit>& units) {
  FileContext ctx;
  const Token* prev = nullptr;
  for (const Token& t : file_tokens) {
    if (!t.significant()) continue;
    if (prev && prev->is_lexeme("import") && t.kind == TokenKind::String && t.lexeme.size() >= 2) {
      std::string_view body(t.lexeme);
      body.remove_prefix(1);
      body.remove_suffix(1);
      ctx.imports.emplace_back(body);
    }
    prev = &t;
  }
  for (const CodeUnit& u : units)
    for (const MemberSpan& m : u.members)
      if (m.kind == MemberKind::Method && !m.name.empty()) ctx.known_functions.insert(m.name);
  return ctx;
}

namespace detail {

/// Significant-token view over one stream, with the lookahead helpers the
/// detectors share.
class SigStream {
 public:
  explicit SigStream(const std::vector<Token>& tokens) {
    for (const Token& t : tokens)
      if (t.significant()) toks_.push_back(&t);
  }

  int size() const { return static_cast<int>(toks_.size()); }
  const Token& at(int i) const { return *toks_[i]; }
  const Token* get(int i) const {
    return i >= 0 && i < size() ? toks_[i] : nullptr;
  }

  /// Index after a balanced `<...>` type-argument list starting at `i`, or
  /// `i` unchanged when no plausible list starts there.
  int skip_type_args(int i) const {
    const Token* t = get(i);
    if (!t || !t->is_lexeme("<")) return i;
    int angle = 0;
    int paren = 0;
    for (int k = i; k < size() && k < i + 64; ++k) {
      const Token& c = at(k);
      if (paren == 0) {
        if (c.is_lexeme("<")) ++angle;
        if (c.is_lexeme(">") && --angle == 0) return k + 1;
      }
      if (c.kind == TokenKind::LParen) ++paren;
      if (c.kind == TokenKind::RParen) {
        if (paren == 0) return i;  // comparison inside an argument list
        --paren;
      }
      switch (c.kind) {
        case TokenKind::Semicolon:
        case TokenKind::LBrace:
        case TokenKind::RBrace:
        case TokenKind::Arrow:
        case TokenKind::String:
        case TokenKind::Number:
          return i;  // not a type-argument list
        default:
          break;
      }
      if (c.is_lexeme("=")) return i;
    }
    return i;
  }

  /// Matching RParen for the LParen at `open`, or -1.
  int match_paren(int open) const {
    int depth = 0;
    for (int k = open; k < size(); ++k) {
      if (at(k).kind == TokenKind::LParen) ++depth;
      if (at(k).kind == TokenKind::RParen && --depth == 0) return k;
    }
    return -1;
  }

 private:
  std::vector<const Token*> toks_;
};

inline IcpFinding make_finding(CategoryId cat, std::string subitem, const Token& anchor) {
  IcpFinding f;
  f.category = cat;
  f.subitem = std::move(subitem);
  f.span = anchor.span;
  return f;
}

/// `Prefix*`, `*Suffix` or exact-name matching for the animated patterns.
inline bool wildcard_match(std::string_view pattern, std::string_view name) {
  if (pattern.size() >= 2 && pattern.back() == '*')
    return name.substr(0, pattern.size() - 1) == pattern.substr(0, pattern.size() - 1);
  if (pattern.size() >= 2 && pattern.front() == '*') {
    std::string_view suffix = pattern.substr(1);
    return name.size() >= suffix.size() && name.substr(name.size() - suffix.size()) == suffix;
  }
  return pattern == name;
}

/// Token position just before the unit body, i.e. the extends/with/implements
/// clause region, expressed as a byte bound.
inline std::size_t header_end_byte(const CodeUnit& unit) {
  if (unit.body_span.empty() && unit.kind != UnitKind::TopLevel) return unit.decl_span.byte_end;
  return unit.body_span.byte_start;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Category detectors. Each is a pure function of (unit, streams, params);
// categories are independent, so one token may contribute findings to several.
// ---------------------------------------------------------------------------

/// `if`, `for`, `while` (incl. do-while), `case`, `default` and conditional
/// `?`. `else` only counts when not immediately followed by `if`, so an
/// `else if` chain contributes one point per decision.
inline std::vector<IcpFinding> detect_branches(const CodeUnit& unit, const UnitStreams& streams) {
  (void)unit;
  std::vector<IcpFinding> out;
  for (const auto& stream : streams.streams) {
    detail::SigStream sig(stream);
    for (int i = 0; i < sig.size(); ++i) {
      const Token& t = sig.at(i);
      if (t.kind == TokenKind::Keyword) {
        if (t.is_lexeme("if") || t.is_lexeme("for") || t.is_lexeme("while") ||
            t.is_lexeme("case") || t.is_lexeme("default")) {
          out.push_back(detail::make_finding(CategoryId::BranchesLoops, "default", t));
        } else if (t.is_lexeme("else")) {
          const Token* next = sig.get(i + 1);
          if (!next || !next->is_lexeme("if"))
            out.push_back(detail::make_finding(CategoryId::BranchesLoops, "default", t));
        }
      } else if (t.kind == TokenKind::Question) {
        out.push_back(detail::make_finding(CategoryId::BranchesLoops, "default", t));
      }
    }
  }
  return out;
}

/// (a) function expressions and detectable tear-offs in call-argument
/// position; (b) fields and constructor parameters whose type matches a
/// service pattern. Bare identifiers are only tear-offs when they name a
/// function declared in this file; anything else is indistinguishable from
/// a plain variable without type resolution and is skipped.
inline std::vector<IcpFinding> detect_coupling(const CodeUnit& unit, const UnitStreams& streams,
                                               const DetectorParams& params,
                                               const FileContext& ctx) {
  std::vector<IcpFinding> out;

  for (const auto& stream : streams.streams) {
    detail::SigStream sig(stream);
    for (int i = 0; i < sig.size(); ++i) {
      const Token& t = sig.at(i);
      const Token* prev = sig.get(i - 1);
      bool arg_position = prev && (prev->kind == TokenKind::LParen ||
                                   prev->kind == TokenKind::Comma ||
                                   prev->kind == TokenKind::Colon);
      if (!arg_position) continue;

      if (t.kind == TokenKind::LParen) {
        int close = sig.match_paren(i);
        if (close < 0) continue;
        int k = close + 1;
        const Token* after = sig.get(k);
        if (after && (after->is_lexeme("async") || after->is_lexeme("sync"))) {
          ++k;
          if (sig.get(k) && sig.get(k)->is_lexeme("*")) ++k;
          after = sig.get(k);
        }
        if (after && (after->kind == TokenKind::LBrace || after->kind == TokenKind::Arrow))
          out.push_back(detail::make_finding(CategoryId::Coupling, "default", t));
      } else if (t.kind == TokenKind::Ident && ctx.known_functions.count(t.lexeme)) {
        const Token* next = sig.get(i + 1);
        if (next && (next->kind == TokenKind::Comma || next->kind == TokenKind::RParen))
          out.push_back(detail::make_finding(CategoryId::Coupling, "default", t));
      }
    }
  }

  std::vector<std::regex> service;
  service.reserve(params.service_type_patterns.size());
  for (const auto& p : params.service_type_patterns) service.emplace_back(p);
  auto matches_service = [&](const std::string& name) {
    for (const auto& re : service)
      if (std::regex_match(name, re)) return true;
    return false;
  };

  static const std::set<std::string_view> kDeclModifiers = {"final", "const",  "var",
                                                            "late",  "static", "covariant"};
  detail::SigStream sig(streams.streams[0]);
  for (const MemberSpan& m : unit.members) {
    if (m.kind == MemberKind::Field) {
      for (int i = 0; i < sig.size(); ++i) {
        const Token& t = sig.at(i);
        if (t.span.byte_start < m.span.byte_start) continue;
        if (t.span.byte_start >= m.span.byte_end) break;
        if (kDeclModifiers.count(t.lexeme)) continue;
        if (t.kind != TokenKind::Ident) break;  // metadata or other keywords: give up early
        const Token* next = sig.get(i + 1);
        bool type_position =
            next && (next->kind == TokenKind::Ident || next->is_lexeme("<") ||
                     next->kind == TokenKind::NullableMark);
        if (type_position && matches_service(t.lexeme))
          out.push_back(detail::make_finding(CategoryId::Coupling, "default", t));
        break;  // only the leading type name of the field is checked
      }
    } else if (m.kind == MemberKind::Constructor) {
      int open = -1;
      for (int i = 0; i < sig.size(); ++i) {
        const Token& t = sig.at(i);
        if (t.span.byte_start < m.span.byte_start) continue;
        if (t.span.byte_start >= m.span.byte_end) break;
        if (t.kind == TokenKind::LParen) {
          open = i;
          break;
        }
      }
      if (open < 0) continue;
      int close = sig.match_paren(open);
      if (close < 0) continue;
      for (int i = open + 1; i < close; ++i) {
        const Token& t = sig.at(i);
        if (t.kind != TokenKind::Ident || !matches_service(t.lexeme)) continue;
        const Token* next = sig.get(i + 1);
        bool type_position = next && (next->kind == TokenKind::Ident ||
                                      (next->kind == TokenKind::NullableMark && sig.get(i + 2) &&
                                       sig.get(i + 2)->kind == TokenKind::Ident));
        if (type_position)
          out.push_back(detail::make_finding(CategoryId::Coupling, "default", t));
      }
    }
  }
  return out;
}

/// Every `?` classified as nullable plus the null-aware operators.
inline std::vector<IcpFinding> detect_nullable(const CodeUnit& unit, const UnitStreams& streams) {
  (void)unit;
  std::vector<IcpFinding> out;
  for (const auto& stream : streams.streams) {
    for (const Token& t : stream) {
      switch (t.kind) {
        case TokenKind::NullableMark:
        case TokenKind::NullAwareDot:
        case TokenKind::IfNull:
        case TokenKind::IfNullAssign:
          out.push_back(detail::make_finding(CategoryId::Nullable, "default", t));
          break;
        default:
          break;
      }
    }
  }
  return out;
}

namespace detail {

// A named declaration head: `name (params)` followed by `{`, `=>`, a
// generator marker or `;`. Calls never carry async markers and, for the
// `;` form, never a Future/Stream return type directly before the name.
struct DeclHead {
  int name_index = -1;
  bool marked_async = false;   // async / async* / sync*
  bool future_return = false;  // return type lexically starts Future/Stream
};

inline bool future_or_stream(const Token* t) {
  return t && (t->is_lexeme("Future") || t->is_lexeme("Stream"));
}

// Walks back from the name over `?` and a balanced `<...>` to the return
// type identifier, if any.
inline bool return_type_is_async(const SigStream& sig, int name_index) {
  int i = name_index - 1;
  const Token* t = sig.get(i);
  if (t && t->kind == TokenKind::NullableMark) t = sig.get(--i);
  if (t && t->is_lexeme(">")) {
    int depth = 0;
    while (i >= 0) {
      if (sig.at(i).is_lexeme(">")) ++depth;
      if (sig.at(i).is_lexeme("<") && --depth == 0) {
        --i;
        break;
      }
      --i;
    }
    t = sig.get(i);
  }
  return future_or_stream(t);
}

}  // namespace detail

/// Create: named declarations marked `async`/`async*`/`sync*` or whose
/// return type lexically starts `Future`/`Stream` (one finding per
/// declaration, both signals dedup). Handle: `await` plus `.then(`,
/// `.catchError(`, `.whenComplete(`, `.listen(`.
inline std::vector<IcpFinding> detect_async_function(const CodeUnit& unit,
                                                     const UnitStreams& streams) {
  (void)unit;
  std::vector<IcpFinding> out;
  static const std::set<std::string_view> kHandlers = {"then", "catchError", "whenComplete",
                                                       "listen"};
  for (const auto& stream : streams.streams) {
    detail::SigStream sig(stream);
    for (int i = 0; i < sig.size(); ++i) {
      const Token& t = sig.at(i);

      if (t.is_lexeme("await")) {
        out.push_back(detail::make_finding(CategoryId::AsyncFunction, "handle", t));
        continue;
      }
      if (t.kind == TokenKind::Dot || t.kind == TokenKind::NullAwareDot || t.is_lexeme("..")) {
        const Token* name = sig.get(i + 1);
        if (name && name->kind == TokenKind::Ident && kHandlers.count(name->lexeme)) {
          int k = sig.skip_type_args(i + 2);
          const Token* open = sig.get(k == i + 2 ? i + 2 : k);
          if (open && open->kind == TokenKind::LParen)
            out.push_back(detail::make_finding(CategoryId::AsyncFunction, "handle", *name));
        }
        continue;
      }

      // Function declarations: name(...) [async|async*|sync*] ({ | => | ;)
      if (t.kind == TokenKind::LParen) {
        const Token* prev = sig.get(i - 1);
        int name_index = i - 1;
        if (prev && prev->is_lexeme(">")) {  // generic method: name<T>(...)
          int depth = 0;
          int k = i - 1;
          while (k >= 0) {
            if (sig.at(k).is_lexeme(">")) ++depth;
            if (sig.at(k).is_lexeme("<") && --depth == 0) {
              --k;
              break;
            }
            --k;
          }
          name_index = k;
          prev = sig.get(k);
        }
        if (!prev || prev->kind != TokenKind::Ident) continue;
        // Skip call syntax `obj.name(...)`.
        const Token* before_name = sig.get(name_index - 1);
        if (before_name && (before_name->kind == TokenKind::Dot ||
                            before_name->kind == TokenKind::NullAwareDot ||
                            before_name->is_lexeme("..")))
          continue;
        int close = sig.match_paren(i);
        if (close < 0) continue;
        int k = close + 1;
        bool marked = false;
        const Token* after = sig.get(k);
        if (after && (after->is_lexeme("async") || after->is_lexeme("sync"))) {
          marked = true;
          ++k;
          if (sig.get(k) && sig.get(k)->is_lexeme("*")) ++k;
          after = sig.get(k);
        }
        bool has_body = after && (after->kind == TokenKind::LBrace || after->kind == TokenKind::Arrow);
        bool abstract_decl = after && after->kind == TokenKind::Semicolon;
        if (!has_body && !abstract_decl) continue;
        bool async_return = detail::return_type_is_async(sig, name_index);
        if ((marked && has_body) || (async_return && (has_body || abstract_decl)))
          out.push_back(detail::make_finding(CategoryId::AsyncFunction, "create", *prev));
        continue;
      }

      // Getters: [Future<T>] get name ({ | => | async...)
      if (t.is_lexeme("get") && t.kind == TokenKind::Ident) {
        const Token* before = sig.get(i - 1);
        if (before && (before->kind == TokenKind::Dot || before->kind == TokenKind::NullAwareDot))
          continue;
        const Token* name = sig.get(i + 1);
        if (!name || name->kind != TokenKind::Ident) continue;
        int k = i + 2;
        bool marked = false;
        const Token* after = sig.get(k);
        if (after && (after->is_lexeme("async") || after->is_lexeme("sync"))) {
          marked = true;
          ++k;
          if (sig.get(k) && sig.get(k)->is_lexeme("*")) ++k;
          after = sig.get(k);
        }
        bool has_body = after && (after->kind == TokenKind::LBrace || after->kind == TokenKind::Arrow);
        bool abstract_decl = after && after->kind == TokenKind::Semicolon;
        if (!has_body && !abstract_decl) continue;
        bool async_return = detail::return_type_is_async(sig, i);
        if ((marked && has_body) || (async_return && (has_body || abstract_decl)))
          out.push_back(detail::make_finding(CategoryId::AsyncFunction, "create", *name));
      }
    }
  }
  return out;
}

/// `FutureBuilder` / `StreamBuilder` in constructor-invocation position:
/// the exact identifier, optional `<...>`, then `(`.
inline std::vector<IcpFinding> detect_async_widget(const CodeUnit& unit,
                                                   const UnitStreams& streams) {
  (void)unit;
  std::vector<IcpFinding> out;
  for (const auto& stream : streams.streams) {
    detail::SigStream sig(stream);
    for (int i = 0; i < sig.size(); ++i) {
      const Token& t = sig.at(i);
      if (t.kind != TokenKind::Ident) continue;
      if (!t.is_lexeme("FutureBuilder") && !t.is_lexeme("StreamBuilder")) continue;
      int k = sig.skip_type_args(i + 1);
      const Token* open = sig.get(k);
      if (open && open->kind == TokenKind::LParen)
        out.push_back(detail::make_finding(CategoryId::AsyncWidget, "default", t));
    }
  }
  return out;
}

/// Provider-style state management. Notifier: ChangeNotifier/ValueNotifier in
/// an extends/with clause plus notifyListeners() calls. Consumer: Consumer</
/// Selector</Provider.of/context.watch/context.read. OtherLib: configured
/// identifiers, gated on the file importing a matching package.
inline std::vector<IcpFinding> detect_state_mgmt(const CodeUnit& unit, const UnitStreams& streams,
                                                 const DetectorParams& params,
                                                 const FileContext& ctx) {
  std::vector<IcpFinding> out;
  const std::size_t header_end = detail::header_end_byte(unit);

  // extends/with clause of the unit header (stream 0 only).
  if (unit.kind != UnitKind::TopLevel) {
    detail::SigStream sig(streams.streams[0]);
    bool counting = false;
    for (int i = 0; i < sig.size(); ++i) {
      const Token& t = sig.at(i);
      if (t.span.byte_start >= header_end) break;
      if (t.is_lexeme("extends") || t.is_lexeme("with"))
        counting = true;
      else if (t.is_lexeme("implements") || t.is_lexeme("on"))
        counting = false;
      else if (counting && t.kind == TokenKind::Ident &&
               (t.is_lexeme("ChangeNotifier") || t.is_lexeme("ValueNotifier")))
        out.push_back(detail::make_finding(CategoryId::StateMgmt, "notifier", t));
    }
  }

  bool other_lib_active = false;
  for (const std::string& uri : ctx.imports) {
    std::string_view v(uri);
    if (v.substr(0, 8) != "package:") continue;
    v.remove_prefix(8);
    std::string_view pkg = v.substr(0, v.find('/'));
    for (const auto& name : params.other_lib_imports)
      if (pkg == name) other_lib_active = true;
  }

  std::vector<std::pair<std::string, std::string>> dotted;  // other_lib "a.b" patterns
  std::vector<std::string> plain;
  for (const auto& p : params.other_lib_patterns) {
    auto dot = p.find('.');
    if (dot == std::string::npos)
      plain.push_back(p);
    else
      dotted.emplace_back(p.substr(0, dot), p.substr(dot + 1));
  }

  for (const auto& stream : streams.streams) {
    detail::SigStream sig(stream);
    for (int i = 0; i < sig.size(); ++i) {
      const Token& t = sig.at(i);
      if (t.kind != TokenKind::Ident) continue;

      if (params.count_notify_listeners && t.is_lexeme("notifyListeners") && sig.get(i + 1) &&
          sig.get(i + 1)->kind == TokenKind::LParen) {
        out.push_back(detail::make_finding(CategoryId::StateMgmt, "notifier", t));
        continue;
      }
      if ((t.is_lexeme("Consumer") || t.is_lexeme("Selector")) && sig.get(i + 1) &&
          sig.get(i + 1)->is_lexeme("<")) {
        out.push_back(detail::make_finding(CategoryId::StateMgmt, "consumer", t));
        continue;
      }
      if (t.is_lexeme("Provider") && sig.get(i + 1) && sig.get(i + 1)->kind == TokenKind::Dot &&
          sig.get(i + 2) && sig.get(i + 2)->is_lexeme("of")) {
        out.push_back(detail::make_finding(CategoryId::StateMgmt, "consumer", t));
        continue;
      }
      if (t.is_lexeme("context") && sig.get(i + 1) && sig.get(i + 1)->kind == TokenKind::Dot &&
          sig.get(i + 2) &&
          (sig.get(i + 2)->is_lexeme("watch") || sig.get(i + 2)->is_lexeme("read"))) {
        out.push_back(detail::make_finding(CategoryId::StateMgmt, "consumer", t));
        continue;
      }

      if (other_lib_active) {
        bool hit = false;
        for (const auto& name : plain)
          if (t.lexeme == name) hit = true;
        if (!hit) {
          for (const auto& [head, tail] : dotted)
            if (t.lexeme == head && sig.get(i + 1) && sig.get(i + 1)->kind == TokenKind::Dot &&
                sig.get(i + 2) && sig.get(i + 2)->lexeme == tail)
              hit = true;
        }
        if (hit) out.push_back(detail::make_finding(CategoryId::StateMgmt, "other_lib", t));
      }
    }
  }
  return out;
}

/// `Animated*`, `*Transition`, `AnimationController`, `Tween` (configurable)
/// in invocation or type position.
inline std::vector<IcpFinding> detect_animated(const CodeUnit& unit, const UnitStreams& streams,
                                               const DetectorParams& params) {
  (void)unit;
  std::vector<IcpFinding> out;
  for (const auto& stream : streams.streams) {
    detail::SigStream sig(stream);
    for (int i = 0; i < sig.size(); ++i) {
      const Token& t = sig.at(i);
      if (t.kind != TokenKind::Ident) continue;
      bool hit = false;
      for (const auto& p : params.animated_patterns)
        if (detail::wildcard_match(p, t.lexeme)) hit = true;
      if (!hit) continue;
      const Token* next = sig.get(i + 1);
      if (!next) continue;
      bool usage = next->kind == TokenKind::LParen || next->is_lexeme("<") ||
                   next->is_lexeme(">") || next->kind == TokenKind::Dot ||
                   next->kind == TokenKind::Ident || next->kind == TokenKind::NullableMark ||
                   next->kind == TokenKind::Comma;
      if (usage) out.push_back(detail::make_finding(CategoryId::AnimatedWidget, "default", t));
    }
  }
  return out;
}

/// Configured basic widgets in invocation position (exact-name match, like
/// the asynchronous-widget rule). Active only under tables that include the
/// category.
inline std::vector<IcpFinding> detect_basic_widget(const CodeUnit& unit,
                                                   const UnitStreams& streams,
                                                   const DetectorParams& params) {
  (void)unit;
  std::vector<IcpFinding> out;
  for (const auto& stream : streams.streams) {
    detail::SigStream sig(stream);
    for (int i = 0; i < sig.size(); ++i) {
      const Token& t = sig.at(i);
      if (t.kind != TokenKind::Ident) continue;
      bool hit = false;
      for (const auto& name : params.widget_names)
        if (t.lexeme == name) hit = true;
      if (!hit) continue;
      int k = sig.skip_type_args(i + 1);
      const Token* open = sig.get(k);
      if (open && open->kind == TokenKind::LParen)
        out.push_back(detail::make_finding(CategoryId::BasicWidget, "default", t));
    }
  }
  return out;
}

namespace detail {

inline int member_index_for(const CodeUnit& unit, const SourceSpan& span) {
  for (std::size_t i = 0; i < unit.members.size(); ++i)
    if (unit.members[i].span.contains(span.byte_start)) return static_cast<int>(i);
  return -1;
}

}  // namespace detail

/// Run every detector the table enables over one unit and return the merged
/// finding list, ordered by span start. Subitems collapse to `default` for
/// tables that do not split the category.
inline std::vector<IcpFinding> detect(const CodeUnit& unit, const std::vector<Token>& file_tokens,
                                      const IcpTable& table, const FileContext& ctx) {
  UnitStreams streams = build_unit_streams(unit, file_tokens);
  std::vector<IcpFinding> all;
  auto append = [&](std::vector<IcpFinding> found) {
    all.insert(all.end(), std::make_move_iterator(found.begin()),
               std::make_move_iterator(found.end()));
  };

  for (const IcpCategory& cat : table.categories) {
    switch (cat.id) {
      case CategoryId::BranchesLoops: append(detect_branches(unit, streams)); break;
      case CategoryId::Coupling: append(detect_coupling(unit, streams, cat.params, ctx)); break;
      case CategoryId::Nullable: append(detect_nullable(unit, streams)); break;
      case CategoryId::AsyncFunction: append(detect_async_function(unit, streams)); break;
      case CategoryId::AsyncWidget: append(detect_async_widget(unit, streams)); break;
      case CategoryId::StateMgmt:
        append(detect_state_mgmt(unit, streams, cat.params, ctx));
        break;
      case CategoryId::AnimatedWidget: append(detect_animated(unit, streams, cat.params)); break;
      case CategoryId::BasicWidget:
        append(detect_basic_widget(unit, streams, cat.params));
        break;
    }
  }

  for (IcpFinding& f : all) {
    f.unit = &unit;
    f.member_index = detail::member_index_for(unit, f.span);
    const IcpCategory* cat = table.find(f.category);
    if (cat && cat->single_default()) f.subitem = "default";
  }
  std::sort(all.begin(), all.end(), [](const IcpFinding& a, const IcpFinding& b) {
    if (a.span.byte_start != b.span.byte_start) return a.span.byte_start < b.span.byte_start;
    if (a.category != b.category) return a.category < b.category;
    return a.subitem < b.subitem;
  });
  return all;
}

}  // namespace cddlint
