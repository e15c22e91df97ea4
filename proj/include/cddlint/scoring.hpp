#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cddlint/icp_config.hpp"
#include "cddlint/icp_rules.hpp"
#include "cddlint/unit_extractor.hpp"

namespace cddlint {

class ScoringError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scored result for one code unit.
struct UnitReport {
  std::string unit_name;
  UnitKind unit_kind = UnitKind::Class;
  std::string file;
  SourceSpan span;  // the unit's decl_span
  int loc = 0;
  std::map<std::pair<CategoryId, std::string>, int> counts;  // (category, subitem) -> count
  int weighted_total = 0;
  int limit = 0;
  bool over_limit = false;

  int category_count(CategoryId id) const {
    int n = 0;
    for (const auto& [key, count] : counts)
      if (key.first == id) n += count;
    return n;
  }
};

struct ProjectReport {
  std::string table_name;
  std::string table_version;
  std::vector<UnitReport> unit_reports;  // sorted by (file, span start)
  int class_count = 0;                   // units excluding the synthetic toplevel groups
  int total_loc = 0;
  double avg_loc = 0.0;       // all units, toplevel included
  double top3_avg_loc = 0.0;  // mean LOC of the 3 largest units (all if fewer)
  int total_weighted_icp = 0;
  std::vector<std::string> violations;  // by weighted_total desc, then name
  std::string timestamp;                // ISO-8601; excluded from equality/determinism
};

/// Before/after deltas between two project snapshots. Percentages are
/// (after - before) / before * 100 rounded half away from zero to one
/// decimal; a zero baseline makes the delta undefined (absent).
struct ComparisonReport {
  struct Side {
    std::string table_name;
    std::string table_version;
    int class_count = 0;
    double avg_loc = 0.0;
    double top3_avg_loc = 0.0;
    int total_weighted_icp = 0;
    int violation_count = 0;
  };
  Side before;
  Side after;
  std::optional<double> delta_class_count_pct;
  std::optional<double> delta_avg_loc_pct;
  std::optional<double> delta_top3_avg_loc_pct;
  std::optional<double> delta_total_icp_pct;
  int delta_violations = 0;
  std::vector<std::string> warnings;
};

inline double round1(double x) { return std::round(x * 10.0) / 10.0; }

inline UnitReport score_unit(const std::vector<IcpFinding>& findings, const CodeUnit& unit,
                             const IcpTable& table) {
  UnitReport r;
  r.unit_name = unit.name;
  r.unit_kind = unit.kind;
  r.file = unit.decl_span.file_path;
  r.span = unit.decl_span;
  r.loc = unit.loc;
  r.limit = table.limit;
  for (const IcpFinding& f : findings) {
    auto w = table.weight(f.category, f.subitem);
    if (!w)
      throw ScoringError("finding (" + std::string(category_name(f.category)) + ", " + f.subitem +
                         ") has no weight in table '" + table.name +
                         "' (detector/table mismatch)");
    r.counts[{f.category, f.subitem}] += 1;
  }
  for (const auto& [key, count] : r.counts)
    r.weighted_total += count * *table.weight(key.first, key.second);
  r.over_limit = r.weighted_total > r.limit;
  return r;
}

inline ProjectReport aggregate(std::vector<UnitReport> unit_reports, const IcpTable& table) {
  ProjectReport p;
  p.table_name = table.name;
  p.table_version = table.version;
  std::sort(unit_reports.begin(), unit_reports.end(), [](const UnitReport& a, const UnitReport& b) {
    if (a.file != b.file) return a.file < b.file;
    if (a.span.byte_start != b.span.byte_start) return a.span.byte_start < b.span.byte_start;
    return a.unit_name < b.unit_name;
  });
  p.unit_reports = std::move(unit_reports);

  std::vector<int> locs;
  std::vector<const UnitReport*> over;
  for (const UnitReport& r : p.unit_reports) {
    if (r.unit_kind != UnitKind::TopLevel) ++p.class_count;
    p.total_loc += r.loc;
    p.total_weighted_icp += r.weighted_total;
    locs.push_back(r.loc);
    if (r.over_limit) over.push_back(&r);
  }
  if (!p.unit_reports.empty()) {
    p.avg_loc = static_cast<double>(p.total_loc) / static_cast<double>(p.unit_reports.size());
    std::sort(locs.begin(), locs.end(), std::greater<int>());
    std::size_t n = std::min<std::size_t>(3, locs.size());
    long sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += locs[i];
    p.top3_avg_loc = static_cast<double>(sum) / static_cast<double>(n);
  }
  std::sort(over.begin(), over.end(), [](const UnitReport* a, const UnitReport* b) {
    if (a->weighted_total != b->weighted_total) return a->weighted_total > b->weighted_total;
    return a->unit_name < b->unit_name;
  });
  for (const UnitReport* r : over) p.violations.push_back(r->unit_name);
  return p;
}

namespace detail {

inline std::optional<double> pct_delta(double before, double after) {
  if (before == 0.0) return std::nullopt;
  return round1((after - before) / before * 100.0);
}

inline ComparisonReport::Side summary_of(const ProjectReport& r) {
  ComparisonReport::Side s;
  s.table_name = r.table_name;
  s.table_version = r.table_version;
  s.class_count = r.class_count;
  s.avg_loc = r.avg_loc;
  s.top3_avg_loc = r.top3_avg_loc;
  s.total_weighted_icp = r.total_weighted_icp;
  s.violation_count = static_cast<int>(r.violations.size());
  return s;
}

}  // namespace detail

/// Requires the same table name on both sides; a version mismatch only
/// produces a warning, so a tightened table can still be compared.
inline ComparisonReport compare(const ProjectReport& before, const ProjectReport& after) {
  if (before.table_name != after.table_name)
    throw ScoringError("cannot compare reports scored against different tables ('" +
                       before.table_name + "' vs '" + after.table_name + "')");
  ComparisonReport c;
  c.before = detail::summary_of(before);
  c.after = detail::summary_of(after);
  if (before.table_version != after.table_version)
    c.warnings.push_back("table version differs: '" + before.table_version + "' vs '" +
                         after.table_version + "'");
  c.delta_class_count_pct = detail::pct_delta(before.class_count, after.class_count);
  c.delta_avg_loc_pct = detail::pct_delta(before.avg_loc, after.avg_loc);
  c.delta_top3_avg_loc_pct = detail::pct_delta(before.top3_avg_loc, after.top3_avg_loc);
  c.delta_total_icp_pct = detail::pct_delta(before.total_weighted_icp, after.total_weighted_icp);
  c.delta_violations = c.after.violation_count - c.before.violation_count;
  return c;
}

}  // namespace cddlint
