#pragma once

// Deterministic random generators for the property suites. Everything is
// seeded explicitly so failures reproduce.

#include <random>
#include <string>
#include <vector>

#include "cddlint/icp_config.hpp"
#include "cddlint/unit_extractor.hpp"

namespace cddtest {

using Rng = std::mt19937;

inline int rand_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

template <typename T>
inline const T& pick(Rng& rng, const std::vector<T>& options) {
  return options[static_cast<std::size_t>(rand_int(rng, 0, static_cast<int>(options.size()) - 1))];
}

// ---- random Dart-like source (lexer round-trip) ---------------------------

inline std::string gen_whitespace(Rng& rng) {
  static const std::vector<std::string> kWs = {" ", "  ", "\n", " \n ", "\t", "\n\n", " "};
  return pick(rng, kWs);
}

inline std::string gen_ident(Rng& rng) {
  static const std::vector<std::string> kIdents = {
      "a",     "b",      "count",  "value",  "snapshot", "builder", "async", "await",
      "sync",  "mixin",  "x1",     "_priv",  "$dollar",  "name",    "if_",   "Future",
      "class", "else",   "for",    "while",  "case",     "default", "var",   "final",
      "int",   "String", "double", "return",
  };
  return pick(rng, kIdents);
}

inline std::string gen_number(Rng& rng) {
  static const std::vector<std::string> kNums = {"0",   "1",    "42",     "3.14", "1e3",
                                                 "2.5e-2", "0x1F", "1_000", "7"};
  return pick(rng, kNums);
}

inline std::string gen_operator(Rng& rng) {
  static const std::vector<std::string> kOps = {
      "+",  "-",  "*",  "/",  "%",  "=",  "==", "!=", "<",  ">",  "<=", ">=",
      "&&", "||", "!",  "??", "?.", "?\?=", "=>", ";",  ",",  ":",  ".",  "(",
      ")",  "[",  "]",  "{",  "}",  "?",  "..", "...", "@",  "~/", ">>", "<<",
  };
  return pick(rng, kOps);
}

inline std::string gen_line_comment(Rng& rng) {
  return "// note " + gen_ident(rng);
}

inline std::string gen_block_comment(Rng& rng, int depth = 0) {
  std::string body = " " + gen_ident(rng) + " ";
  if (depth < 2 && chance(rng, 0.3)) body += gen_block_comment(rng, depth + 1) + " ";
  return "/*" + body + "*/";
}

inline std::string gen_string(Rng& rng, int depth = 0);

inline std::string gen_interpolation(Rng& rng, int depth) {
  int form = rand_int(rng, 0, 3);
  if (form == 0) return "$" + gen_ident(rng);
  std::string inner;
  switch (rand_int(rng, 0, 2)) {
    case 0: inner = gen_ident(rng) + " + " + gen_number(rng); break;
    case 1: inner = gen_ident(rng) + " ? " + gen_number(rng) + " : " + gen_number(rng); break;
    default:
      inner = depth < 2 ? gen_string(rng, depth + 1) : gen_ident(rng);
      break;
  }
  if (chance(rng, 0.3)) inner = "{" + gen_ident(rng) + ": " + inner + "}";  // nested braces
  return "${" + inner + "}";
}

inline std::string gen_string(Rng& rng, int depth) {
  bool raw = chance(rng, 0.2);
  bool triple = chance(rng, 0.2);
  bool dquote = chance(rng, 0.5);
  std::string q = dquote ? "\"" : "'";
  std::string quote = triple ? q + q + q : q;
  std::string body;
  int pieces = rand_int(rng, 0, 3);
  for (int i = 0; i < pieces; ++i) {
    switch (rand_int(rng, 0, 4)) {
      case 0: body += gen_ident(rng); break;
      case 1: body += " "; break;
      case 2:
        if (!raw) {
          body += "\\" + std::string(1, pick(rng, std::vector<std::string>{"n", "t", "$", "\\"})[0]);
        } else {
          body += gen_number(rng);
        }
        break;
      case 3:
        if (!raw && depth < 2) body += gen_interpolation(rng, depth);
        break;
      default:
        if (triple) body += "\n";
        break;
    }
  }
  return (raw ? "r" : "") + quote + body + quote;
}

/// A random whitespace-separated soup of valid Dart lexical elements,
/// optionally ending in an unterminated string or block comment.
inline std::string gen_dartish_source(Rng& rng, bool* truncated = nullptr) {
  std::string src;
  int n = rand_int(rng, 0, 60);
  for (int i = 0; i < n; ++i) {
    switch (rand_int(rng, 0, 9)) {
      case 0: src += gen_string(rng, 0); break;
      case 1: src += gen_line_comment(rng) + "\n"; break;
      case 2: src += gen_block_comment(rng); break;
      case 3: src += gen_number(rng); break;
      case 4:
      case 5: src += gen_ident(rng); break;
      default: src += gen_operator(rng); break;
    }
    // Leave some fragments adjacent so maximal munch gets exercised.
    if (!chance(rng, 0.25)) src += gen_whitespace(rng);
  }
  bool cut = chance(rng, 0.08);
  if (truncated) *truncated = cut;
  if (cut) src += chance(rng, 0.5) ? "'oops ${unclosed" : "/* dangling " + gen_ident(rng);
  return src;
}

// ---- random classes (annotate/audit round-trip) ---------------------------

struct MemberTemplate {
  std::string code;  // with NAME placeholder
};

inline std::string gen_class_source(Rng& rng, const std::string& class_name) {
  static const std::vector<std::string> kMembers = {
      "  int NAME(int v) {\n    if (v > 0) {\n      return v;\n    }\n    return 0;\n  }\n",
      "  Future<int> NAME() async {\n    return 1;\n  }\n",
      "  void NAME(List<int> xs) {\n    xs.forEach((e) => use(e));\n  }\n",
      "  String NAME(bool f) {\n    return f ? 'y' : 'n';\n  }\n",
      "  int NAME = 0;\n",
      "  String? NAME;\n",
      "  Widget NAME(dynamic t) {\n    return FutureBuilder(future: t, builder: (c, s) => leaf);\n  }\n",
      "  void NAME() {\n    for (var i = 0; i < 3; i++) {\n      tick();\n    }\n  }\n",
      "  double NAME(double a, double b) => a + b;\n",
  };
  std::string src;
  bool notifier = chance(rng, 0.3);
  src += "class " + class_name + (notifier ? " with ChangeNotifier {\n" : " {\n");
  int members = rand_int(rng, 1, 4);
  for (int m = 0; m < members; ++m) {
    std::string code = pick(rng, kMembers);
    std::string name = "m" + std::to_string(m) + "_" + class_name;
    while (code.find("NAME") != std::string::npos)
      code.replace(code.find("NAME"), 4, name);
    src += code;
  }
  if (notifier && chance(rng, 0.5)) src += "  void ping() {\n    notifyListeners();\n  }\n";
  src += "}\n";
  return src;
}

inline std::string gen_class_file(Rng& rng, int file_index) {
  std::string src = "import 'dart:async';\n\n";
  int classes = rand_int(rng, 1, 3);
  for (int c = 0; c < classes; ++c)
    src += gen_class_source(rng, "Gen" + std::to_string(file_index) + "C" + std::to_string(c)) +
           "\n";
  return src;
}

// ---- random tables and findings (scoring identities) ----------------------

inline cddlint::IcpTable gen_table(Rng& rng) {
  using namespace cddlint;
  IcpTable t;
  t.name = "random";
  t.version = "r";
  t.limit = rand_int(rng, 1, 40);
  for (CategoryId id : kCategoryOrder) {
    if (!chance(rng, 0.7)) continue;
    IcpCategory cat;
    cat.id = id;
    cat.params = default_params(id);
    if ((id == CategoryId::AsyncFunction || id == CategoryId::StateMgmt) && chance(rng, 0.5)) {
      int subs = rand_int(rng, 1, 3);
      for (int s = 0; s < subs; ++s)
        cat.subitems.push_back({"sub" + std::to_string(s), rand_int(rng, 1, 9)});
    } else {
      cat.subitems.push_back({"default", rand_int(rng, 1, 9)});
    }
    t.categories.push_back(cat);
  }
  if (t.categories.empty()) {
    cddlint::IcpCategory cat;
    cat.id = cddlint::CategoryId::BranchesLoops;
    cat.subitems.push_back({"default", 1});
    t.categories.push_back(cat);
  }
  return t;
}

inline std::vector<cddlint::IcpFinding> gen_findings(Rng& rng, const cddlint::IcpTable& table,
                                                     const cddlint::CodeUnit& unit) {
  std::vector<cddlint::IcpFinding> out;
  int n = rand_int(rng, 0, 60);
  for (int i = 0; i < n; ++i) {
    const auto& cat = table.categories[static_cast<std::size_t>(
        rand_int(rng, 0, static_cast<int>(table.categories.size()) - 1))];
    const auto& sub = cat.subitems[static_cast<std::size_t>(
        rand_int(rng, 0, static_cast<int>(cat.subitems.size()) - 1))];
    cddlint::IcpFinding f;
    f.category = cat.id;
    f.subitem = sub.id;
    f.unit = &unit;
    f.span = cddlint::SourceSpan{unit.decl_span.file_path,
                                 unit.decl_span.byte_start + static_cast<std::size_t>(i),
                                 unit.decl_span.byte_start + static_cast<std::size_t>(i) + 1, 1, 1};
    out.push_back(f);
  }
  return out;
}

}  // namespace cddtest
