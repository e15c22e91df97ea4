#pragma once

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cddlint/analysis.hpp"
#include "cddlint/annotator.hpp"
#include "cddlint/icp_config.hpp"
#include "cddlint/report_io.hpp"
#include "cddlint/scoring.hpp"

namespace cddlint::cli {

// Exit codes: 0 success, 1 policy failure (violations/drift), 2 usage or
// config error, 3 analysis failure (lex/structure errors present).
inline constexpr int kExitOk = 0;
inline constexpr int kExitPolicy = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitAnalysis = 3;

struct CommonOpts {
  std::string config_path;
  std::string preset_name;
  int limit_override = 0;
  std::string format = "text";
  bool no_timestamp = false;
  int jobs = 0;
  std::vector<std::string> excludes;
  bool suggest = false;
};

inline IcpTable resolve_table(const CommonOpts& opts) {
  IcpTable table;
  if (!opts.config_path.empty() && !opts.preset_name.empty())
    throw ConfigError("--config and --preset are mutually exclusive");
  if (!opts.config_path.empty()) {
    table = load_table(opts.config_path);
  } else if (!opts.preset_name.empty()) {
    table = preset(opts.preset_name);
  } else if (const char* env = std::getenv("CDDLINT_CONFIG"); env && *env) {
    table = load_table(env);
  } else {
    table = preset("suggested");
  }
  if (opts.limit_override > 0) table.limit = opts.limit_override;
  return table;
}

inline std::string now_iso8601() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace detail {

inline std::string fixed1(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << v;
  return os.str();
}

inline std::string signed_pct(const std::optional<double>& d) {
  if (!d) return "n/a";
  std::ostringstream os;
  os << (*d >= 0 ? "+" : "") << std::fixed << std::setprecision(1) << *d << "%";
  return os.str();
}

inline void pad(std::ostream& out, const std::string& s, std::size_t width) {
  out << s;
  for (std::size_t i = s.size(); i < width; ++i) out << ' ';
}

inline void print_unit_table(std::ostream& out, const ProjectReport& report) {
  std::vector<const UnitReport*> rows;
  for (const UnitReport& r : report.unit_reports) rows.push_back(&r);
  std::sort(rows.begin(), rows.end(), [](const UnitReport* a, const UnitReport* b) {
    if (a->weighted_total != b->weighted_total) return a->weighted_total > b->weighted_total;
    if (a->unit_name != b->unit_name) return a->unit_name < b->unit_name;
    return a->file < b->file;
  });

  std::size_t name_w = 4, loc_w = 3, icp_w = 3;
  for (const auto* r : rows) {
    name_w = std::max(name_w, r->unit_name.size());
    loc_w = std::max(loc_w, std::to_string(r->loc).size());
    icp_w = std::max(icp_w, std::to_string(r->weighted_total).size());
  }
  pad(out, "UNIT", name_w + 2);
  pad(out, "KIND", 11);
  pad(out, "LOC", loc_w + 2);
  pad(out, "ICP", icp_w + 2);
  pad(out, "LIMIT", 7);
  pad(out, "STATUS", 8);
  out << "LOCATION\n";
  for (const auto* r : rows) {
    pad(out, r->unit_name, name_w + 2);
    pad(out, unit_kind_name(r->unit_kind), 11);
    pad(out, std::to_string(r->loc), loc_w + 2);
    pad(out, std::to_string(r->weighted_total), icp_w + 2);
    pad(out, std::to_string(r->limit), 7);
    pad(out, r->over_limit ? "OVER" : "ok", 8);
    out << r->file << ":" << r->span.line_start << "\n";
  }
}

inline void print_summary(std::ostream& out, const ProjectReport& report,
                          const ProjectAnalysis& pa) {
  out << "\n";
  out << "table: " << report.table_name << " (version " << report.table_version
      << ", limit " << (report.unit_reports.empty() ? 0 : report.unit_reports[0].limit) << ")\n";
  out << "units: " << report.unit_reports.size() << "  classes: " << report.class_count
      << "  files: " << pa.files.size() << "\n";
  out << "total loc: " << report.total_loc << "  avg loc: " << fixed1(report.avg_loc)
      << "  top3 avg loc: " << fixed1(report.top3_avg_loc) << "\n";
  out << "total weighted icp: " << report.total_weighted_icp
      << "  violations: " << report.violations.size() << "\n";
  for (const auto& name : report.violations) out << "  over limit: " << name << "\n";
  for (const FileAnalysis& fa : pa.files)
    if (fa.status != FileStatus::Ok)
      out << "error: " << fa.path << ": " << file_status_name(fa.status)
          << (fa.error.empty() ? "" : " (" + fa.error + ")") << "\n";
}

inline const FileAnalysis* file_for(const ProjectAnalysis& pa, const std::string& path) {
  for (const FileAnalysis& fa : pa.files)
    if (fa.path == path) return &fa;
  return nullptr;
}

inline Json analysis_json(const ProjectAnalysis& pa, bool suggest) {
  Json j = project_report_to_json(pa.report);
  if (suggest) {
    j["suggestions"] = Json::array();
    for (const SplitPlan& plan : pa.suggestions) {
      const FileAnalysis* fa = file_for(pa, plan.file);
      std::vector<MemberSpan> members;
      if (fa) {
        for (const CodeUnit& u : fa->units)
          if (u.name == plan.unit_name) members = u.members;
      }
      j["suggestions"].push_back(split_plan_to_json(plan, members));
    }
  }
  Json errors = Json::array();
  for (const FileAnalysis& fa : pa.files) {
    if (fa.status == FileStatus::Ok) continue;
    errors.push_back({{"file", fa.path}, {"status", file_status_name(fa.status)},
                      {"error", fa.error}});
  }
  j["errors"] = errors;
  return j;
}

inline void print_suggestions_text(std::ostream& out, const ProjectAnalysis& pa) {
  for (const SplitPlan& plan : pa.suggestions) {
    const FileAnalysis* fa = file_for(pa, plan.file);
    std::vector<MemberSpan> members;
    if (fa)
      for (const CodeUnit& u : fa->units)
        if (u.name == plan.unit_name) members = u.members;
    auto member_name = [&](int idx) -> std::string {
      if (idx < 0 || idx >= static_cast<int>(members.size())) return "<none>";
      return members[idx].name.empty() ? "<unnamed>" : members[idx].name;
    };
    out << "\nsplit suggestion for " << plan.unit_name << " (" << plan.original_weighted_total
        << "/" << plan.limit << "):\n";
    out << "  keep in " << plan.unit_name << " (" << plan.residual_total << "):";
    for (int idx : plan.residual_members) out << " " << member_name(idx);
    out << "\n";
    for (const auto& part : plan.proposed_units) {
      out << "  move to " << part.suggested_name << " (" << part.projected_weighted_total << "):";
      for (int idx : part.member_indices) out << " " << member_name(idx);
      out << "\n";
    }
    for (const auto& ir : plan.irreducible)
      out << "  irreducible: " << member_name(ir.member_index) << " alone carries " << ir.weight
          << " > " << plan.limit << "; needs intra-member refactoring\n";
  }
}

}  // namespace detail

inline std::vector<AnnotationDrift> audit_drifts(const FileAnalysis& fa) {
  return audit(fa.source, fa.unit_reports);
}

/// Run the CLI. `args` excludes the program name. Output goes to the given
/// streams, which keeps the whole surface testable in-process.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cddlint: Cognitive-Driven Development complexity checks for Flutter/Dart code"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::vector<std::string> paths;
  bool write = false;
  std::string init_path = "cddlint.json";

  auto add_table_opts = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "ICP table config file (JSON)");
    sub->add_option("--preset", opts.preset_name,
                    "built-in table: suggested, team-v1, team-v2, team-v3");
    sub->add_option("--limit", opts.limit_override, "override the table's per-unit limit");
  };
  auto add_run_opts = [&](CLI::App* sub) {
    add_table_opts(sub);
    sub->add_option("--format", opts.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_flag("--no-timestamp", opts.no_timestamp, "omit the timestamp from JSON reports");
    sub->add_option("--jobs", opts.jobs, "worker threads (default: hardware concurrency)");
    sub->add_option("--exclude", opts.excludes, "extra glob to skip (repeatable)");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "score units and print a project report");
  analyze->add_option("paths", paths, "files or directories")->required();
  add_run_opts(analyze);
  analyze->add_flag("--suggest", opts.suggest, "propose splits for over-limit units");

  CLI::App* check = app.add_subcommand("check", "analyze and fail when any unit is over limit");
  check->add_option("paths", paths, "files or directories")->required();
  add_run_opts(check);
  check->add_flag("--suggest", opts.suggest, "propose splits for over-limit units");

  CLI::App* annotate =
      app.add_subcommand("annotate", "write `// cdd-icp:` annotation lines above units");
  annotate->add_option("paths", paths, "files or directories")->required();
  add_run_opts(annotate);
  annotate->add_flag("--write", write, "apply edits in place (default: print a diff)");

  CLI::App* audit = app.add_subcommand("audit", "report drift between annotations and scores");
  audit->add_option("paths", paths, "files or directories")->required();
  add_run_opts(audit);

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "diff two report JSON files or analyze two trees");
  compare_cmd->add_option("paths", paths, "before and after (report JSON or directory)")
      ->expected(2);
  add_run_opts(compare_cmd);

  CLI::App* init = app.add_subcommand("init", "write a preset table as a starting config");
  init->add_option("path", init_path, "output file (default: cddlint.json)");
  init->add_option("--preset", opts.preset_name,
                   "built-in table: suggested, team-v1, team-v2, team-v3");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (init->parsed()) {
      IcpTable table = preset(opts.preset_name.empty() ? "suggested" : opts.preset_name);
      if (std::filesystem::exists(init_path)) {
        err << "error: '" << init_path << "' already exists\n";
        return kExitUsage;
      }
      save_table(table, init_path);
      out << "wrote " << init_path << " (preset " << table.name << ", limit " << table.limit
          << ")\n";
      return kExitOk;
    }

    for (const auto& p : paths) {
      if (!std::filesystem::exists(p)) {
        err << "error: path '" << p << "' does not exist\n";
        return kExitUsage;
      }
    }

    AnalysisOptions aopts;
    aopts.table = resolve_table(opts);
    aopts.jobs = opts.jobs;
    aopts.suggest = opts.suggest;
    aopts.excludes = default_excludes();
    for (const auto& g : opts.excludes) aopts.excludes.push_back(g);

    if (compare_cmd->parsed()) {
      auto load_side = [&](const std::string& p) -> ProjectReport {
        if (std::filesystem::is_directory(p)) {
          auto files = discover_files({p}, aopts.excludes);
          ProjectAnalysis pa = analyze_project(files, aopts);
          return pa.report;
        }
        return load_project_report(p);
      };
      ProjectReport before = load_side(paths[0]);
      ProjectReport after = load_side(paths[1]);
      ComparisonReport cmp = compare(before, after);
      for (const auto& w : cmp.warnings) err << "warning: " << w << "\n";
      if (opts.format == "json") {
        out << comparison_to_json(cmp).dump(2) << "\n";
      } else {
        out << "table: " << cmp.before.table_name << "\n";
        auto row = [&](const std::string& label, const std::string& b, const std::string& a,
                       const std::string& d) {
          detail::pad(out, label, 20);
          detail::pad(out, b, 12);
          detail::pad(out, a, 12);
          out << d << "\n";
        };
        row("metric", "before", "after", "delta");
        row("class_count", std::to_string(cmp.before.class_count),
            std::to_string(cmp.after.class_count), detail::signed_pct(cmp.delta_class_count_pct));
        row("avg_loc", detail::fixed1(cmp.before.avg_loc), detail::fixed1(cmp.after.avg_loc),
            detail::signed_pct(cmp.delta_avg_loc_pct));
        row("top3_avg_loc", detail::fixed1(cmp.before.top3_avg_loc),
            detail::fixed1(cmp.after.top3_avg_loc),
            detail::signed_pct(cmp.delta_top3_avg_loc_pct));
        row("total_weighted_icp", std::to_string(cmp.before.total_weighted_icp),
            std::to_string(cmp.after.total_weighted_icp),
            detail::signed_pct(cmp.delta_total_icp_pct));
        row("violations", std::to_string(cmp.before.violation_count),
            std::to_string(cmp.after.violation_count),
            (cmp.delta_violations >= 0 ? "+" : "") + std::to_string(cmp.delta_violations));
      }
      return kExitOk;
    }

    auto files = discover_files(paths, aopts.excludes);
    ProjectAnalysis pa = analyze_project(files, aopts);
    if (!opts.no_timestamp) pa.report.timestamp = now_iso8601();

    if (analyze->parsed() || check->parsed()) {
      if (opts.format == "json") {
        out << detail::analysis_json(pa, opts.suggest).dump(2) << "\n";
      } else {
        detail::print_unit_table(out, pa.report);
        detail::print_summary(out, pa.report, pa);
        if (opts.suggest) detail::print_suggestions_text(out, pa);
      }
      if (pa.has_failures()) return kExitAnalysis;
      if (check->parsed() && !pa.report.violations.empty()) return kExitPolicy;
      return kExitOk;
    }

    if (annotate->parsed()) {
      for (FileAnalysis& fa : pa.files) {
        if (fa.status != FileStatus::Ok) continue;
        AnnotateResult res = apply_annotations(
            fa.source, fa.unit_reports, write ? AnnotateMode::Write : AnnotateMode::DryRun);
        if (!res.changed()) continue;
        if (write) {
          std::ofstream f(fa.path, std::ios::binary);
          f << res.output;
          out << fa.path << ": " << res.inserted << " inserted, " << res.replaced
              << " replaced\n";
        } else {
          out << res.output;
        }
      }
      return pa.has_failures() ? kExitAnalysis : kExitOk;
    }

    if (audit->parsed()) {
      int drift_count = 0;
      for (const FileAnalysis& fa : pa.files) {
        if (fa.status != FileStatus::Ok) continue;
        for (const AnnotationDrift& d : audit_drifts(fa)) {
          ++drift_count;
          out << fa.path << ": " << d.unit_name << ": ";
          if (d.malformed) {
            out << "malformed annotation";
          } else if (!d.annotated_total) {
            out << "missing annotation (computed total " << d.computed_total << ")";
          } else {
            out << "annotated total " << *d.annotated_total << ", computed " << d.computed_total;
            for (const auto& m : d.per_category_mismatches)
              out << "; " << category_name(m.category) << " " << m.annotated << " -> "
                  << m.computed;
          }
          out << "\n";
        }
      }
      if (pa.has_failures()) return kExitAnalysis;
      if (drift_count > 0) return kExitPolicy;
      out << "annotations are up to date\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ScoringError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const StaleAnalysisError& e) {
    err << "error: " << e.what() << "\n";
    return kExitAnalysis;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace cddlint::cli
