#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cddlint/icp_config.hpp"
#include "cddlint/lexer.hpp"
#include "cddlint/scoring.hpp"
#include "cddlint/unit_extractor.hpp"

namespace cddlint {

inline constexpr std::string_view kAnnotationPrefix = "// cdd-icp:";

class StaleAnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Disagreement between a unit's `// cdd-icp:` annotation and its computed
/// score; produced by audit only when the two differ (or the annotation is
/// missing/malformed on a unit that needs one).
struct AnnotationDrift {
  std::string unit_name;
  std::string file;
  std::optional<int> annotated_total;  // absent: no (parseable) annotation
  int computed_total = 0;
  struct CategoryMismatch {
    CategoryId category;
    int annotated = 0;
    int computed = 0;
  };
  std::vector<CategoryMismatch> per_category_mismatches;
  bool malformed = false;
};

/// The canonical annotation line, bit-exact:
/// `// cdd-icp: total=<weighted>/<limit> <cat>=<count> ...` with categories in
/// fixed canonical order and zero counts omitted.
inline std::string render_annotation(const UnitReport& report) {
  std::string line = "// cdd-icp: total=" + std::to_string(report.weighted_total) + "/" +
                     std::to_string(report.limit);
  for (CategoryId id : kCategoryOrder) {
    int n = report.category_count(id);
    if (n > 0) line += " " + std::string(category_name(id)) + "=" + std::to_string(n);
  }
  return line;
}

struct ParsedAnnotation {
  int total = 0;
  int limit = 0;
  std::map<CategoryId, int> counts;
};

/// Strict parse of an annotation line (leading whitespace tolerated).
inline std::optional<ParsedAnnotation> parse_annotation(std::string_view line) {
  std::size_t i = line.find_first_not_of(" \t");
  if (i == std::string_view::npos) return std::nullopt;
  line.remove_prefix(i);
  if (line.substr(0, kAnnotationPrefix.size()) != kAnnotationPrefix) return std::nullopt;
  line.remove_prefix(kAnnotationPrefix.size());

  auto read_int = [](std::string_view& s) -> std::optional<int> {
    std::size_t n = 0;
    long v = 0;
    while (n < s.size() && s[n] >= '0' && s[n] <= '9') {
      v = v * 10 + (s[n] - '0');
      if (v > 1000000000) return std::nullopt;
      ++n;
    }
    if (n == 0) return std::nullopt;
    s.remove_prefix(n);
    return static_cast<int>(v);
  };

  ParsedAnnotation out;
  if (line.substr(0, 7) != " total=") return std::nullopt;
  line.remove_prefix(7);
  auto total = read_int(line);
  if (!total || line.empty() || line[0] != '/') return std::nullopt;
  line.remove_prefix(1);
  auto limit = read_int(line);
  if (!limit) return std::nullopt;
  out.total = *total;
  out.limit = *limit;

  while (!line.empty()) {
    if (line[0] != ' ') return std::nullopt;
    line.remove_prefix(1);
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) return std::nullopt;
    auto cat = category_from_name(line.substr(0, eq));
    if (!cat) return std::nullopt;
    line.remove_prefix(eq + 1);
    auto n = read_int(line);
    if (!n) return std::nullopt;
    if (out.counts.count(*cat)) return std::nullopt;
    out.counts[*cat] = *n;
  }
  return out;
}

enum class AnnotateMode { Write, DryRun };

struct AnnotateResult {
  std::string output;  // Write: the edited source; DryRun: a unified diff (empty when clean)
  int inserted = 0;
  int replaced = 0;
  bool changed() const { return inserted + replaced > 0; }
};

namespace detail {

struct SourceLine {
  std::string text;        // without terminator
  std::string terminator;  // "\n", "\r\n" or "" for the last line
};

inline std::vector<SourceLine> split_lines(std::string_view source) {
  std::vector<SourceLine> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source[i] == '\n') {
      std::size_t end = i;
      std::string term = "\n";
      if (end > start && source[end - 1] == '\r') {
        --end;
        term = "\r\n";
      }
      lines.push_back({std::string(source.substr(start, end - start)), term});
      start = i + 1;
    }
  }
  if (start < source.size() || lines.empty())
    lines.push_back({std::string(source.substr(start)), ""});
  return lines;
}

inline bool is_annotation_line(std::string_view text) {
  std::size_t i = text.find_first_not_of(" \t");
  if (i == std::string_view::npos) return false;
  return text.substr(i).substr(0, kAnnotationPrefix.size()) == kAnnotationPrefix;
}

inline std::string leading_whitespace(std::string_view text) {
  std::size_t i = text.find_first_not_of(" \t");
  if (i == std::string_view::npos) return std::string(text);
  return std::string(text.substr(0, i));
}

struct LineEdit {
  int line = 0;  // 1-based line the edit applies to
  bool replace = false;
  std::string old_text;
  std::string new_text;
};

inline void check_not_stale(std::string_view source, const UnitReport& r,
                            const std::vector<SourceLine>& lines) {
  bool ok = r.span.byte_end <= source.size() && r.span.line_start >= 1 &&
            r.span.line_start <= static_cast<int>(lines.size());
  if (ok && r.unit_kind != UnitKind::TopLevel) {
    std::string_view decl(source);
    decl = decl.substr(r.span.byte_start,
                       std::min<std::size_t>(r.span.length(), r.unit_name.size() + 256));
    if (decl.find(r.unit_name) == std::string_view::npos) ok = false;
  }
  if (!ok)
    throw StaleAnalysisError("annotation target for unit '" + r.unit_name +
                             "' does not match the analyzed source (stale analysis?)");
}

}  // namespace detail

/// Insert or refresh the annotation line directly above each unit's
/// declaration. Idempotent: re-applying to an annotated file changes nothing.
/// Reports must come from this exact source; a span mismatch aborts.
inline AnnotateResult apply_annotations(std::string_view source, std::vector<UnitReport> reports,
                                        AnnotateMode mode) {
  AnnotateResult result;
  auto lines = detail::split_lines(source);

  std::sort(reports.begin(), reports.end(),
            [](const UnitReport& a, const UnitReport& b) { return a.span.line_start > b.span.line_start; });

  std::vector<detail::LineEdit> edits;  // collected top-to-bottom after the loop
  for (const UnitReport& r : reports) {
    detail::check_not_stale(source, r, lines);
    int decl_line = r.span.line_start;  // 1-based
    std::string indent = detail::leading_whitespace(lines[decl_line - 1].text);
    std::string ann = indent + render_annotation(r);
    if (decl_line >= 2 && detail::is_annotation_line(lines[decl_line - 2].text)) {
      if (lines[decl_line - 2].text != ann) {
        edits.push_back({decl_line - 1, true, lines[decl_line - 2].text, ann});
        ++result.replaced;
      }
    } else {
      edits.push_back({decl_line, false, "", ann});
      ++result.inserted;
    }
  }
  std::sort(edits.begin(), edits.end(),
            [](const detail::LineEdit& a, const detail::LineEdit& b) { return a.line < b.line; });

  if (mode == AnnotateMode::Write) {
    // Apply bottom-up so line numbers stay valid.
    for (auto it = edits.rbegin(); it != edits.rend(); ++it) {
      if (it->replace) {
        lines[it->line - 1].text = it->new_text;
      } else {
        std::string term = lines[it->line - 1].terminator.empty()
                               ? "\n"
                               : lines[it->line - 1].terminator;
        lines.insert(lines.begin() + (it->line - 1), {it->new_text, term});
      }
    }
    std::string out;
    for (const auto& l : lines) {
      out += l.text;
      out += l.terminator;
    }
    result.output = std::move(out);
    return result;
  }

  // Dry run: a minimal unified diff, one hunk per edit.
  if (edits.empty()) return result;
  std::ostringstream diff;
  const std::string path = reports.empty() ? std::string("<source>") : reports.front().file;
  diff << "--- a/" << path << "\n+++ b/" << path << "\n";
  int offset = 0;  // lines inserted so far, for new-file line numbers
  for (const auto& e : edits) {
    if (e.replace) {
      diff << "@@ -" << e.line << ",1 +" << (e.line + offset) << ",1 @@\n";
      diff << "-" << e.old_text << "\n";
      diff << "+" << e.new_text << "\n";
    } else {
      diff << "@@ -" << (e.line - 1) << ",0 +" << (e.line + offset) << ",1 @@\n";
      diff << "+" << e.new_text << "\n";
      ++offset;
    }
  }
  result.output = diff.str();
  return result;
}

/// Compare the annotations present in `source` against freshly computed unit
/// reports. An empty result means every annotation is faithful. Tolerates
/// extra inline markers elsewhere; only the line directly above each unit's
/// declaration counts.
inline std::vector<AnnotationDrift> audit(std::string_view source,
                                          const std::vector<UnitReport>& reports) {
  std::vector<AnnotationDrift> drifts;
  auto lines = detail::split_lines(source);
  const std::string file = reports.empty() ? std::string() : reports.front().file;

  // Re-extract so annotation lines are found even after this source was
  // edited (inserted annotations shift the original spans).
  LexResult lex = tokenize(source, file);
  ExtractResult ext = extract_units(lex.tokens);

  for (const UnitReport& r : reports) {
    const CodeUnit* unit = nullptr;
    for (const CodeUnit& u : ext.units)
      if (u.name == r.unit_name && u.kind == r.unit_kind) unit = &u;

    AnnotationDrift d;
    d.unit_name = r.unit_name;
    d.file = r.file;
    d.computed_total = r.weighted_total;

    if (!unit) {
      d.malformed = true;
      drifts.push_back(std::move(d));
      continue;
    }
    int decl_line = unit->decl_span.line_start;
    bool has_line = decl_line >= 2 && detail::is_annotation_line(lines[decl_line - 2].text);
    if (!has_line) {
      if (r.weighted_total > 0) drifts.push_back(std::move(d));
      continue;
    }
    auto parsed = parse_annotation(lines[decl_line - 2].text);
    if (!parsed) {
      d.malformed = true;
      drifts.push_back(std::move(d));
      continue;
    }
    d.annotated_total = parsed->total;
    bool mismatch = parsed->total != r.weighted_total;
    for (CategoryId id : kCategoryOrder) {
      int annotated = parsed->counts.count(id) ? parsed->counts.at(id) : 0;
      int computed = r.category_count(id);
      if (annotated != computed) {
        d.per_category_mismatches.push_back({id, annotated, computed});
        mismatch = true;
      }
    }
    if (mismatch) drifts.push_back(std::move(d));
  }
  return drifts;
}

}  // namespace cddlint
