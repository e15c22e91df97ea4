#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cddlint/icp_config.hpp"
#include "cddlint/icp_rules.hpp"
#include "cddlint/lexer.hpp"
#include "cddlint/refactor_advisor.hpp"
#include "cddlint/scoring.hpp"
#include "cddlint/unit_extractor.hpp"

namespace cddlint {

enum class FileStatus { Ok, LexFailed, StructureFailed, IoFailed };

inline const char* file_status_name(FileStatus s) {
  switch (s) {
    case FileStatus::Ok: return "ok";
    case FileStatus::LexFailed: return "lex-failed";
    case FileStatus::StructureFailed: return "structure-failed";
    case FileStatus::IoFailed: return "io-failed";
  }
  return "?";
}

/// Everything the pipeline knows about one analyzed file. Units own the
/// spans that findings point into, so FileAnalysis is move-only.
struct FileAnalysis {
  std::string path;
  std::string source;
  FileStatus status = FileStatus::Ok;
  std::string error;
  std::vector<Token> tokens;
  std::vector<CodeUnit> units;
  std::vector<std::vector<IcpFinding>> findings;  // parallel to units
  std::vector<UnitReport> unit_reports;           // parallel to units

  FileAnalysis() = default;
  FileAnalysis(FileAnalysis&&) = default;
  FileAnalysis& operator=(FileAnalysis&&) = default;
  FileAnalysis(const FileAnalysis&) = delete;
  FileAnalysis& operator=(const FileAnalysis&) = delete;
};

struct AnalysisOptions {
  IcpTable table;
  int jobs = 0;  // 0: hardware concurrency; 1: serial
  bool suggest = false;
  std::vector<std::string> excludes;  // globs, in addition to the defaults
  bool use_default_excludes = true;
};

inline std::vector<std::string> default_excludes() {
  return {"**/*.g.dart", "**/build/**"};
}

namespace detail {

// Translate a glob into an anchored regex. `**/` spans zero or more
// directories, `*` stays within one path segment.
inline std::regex glob_to_regex(const std::string& glob) {
  std::string re;
  std::size_t i = 0;
  while (i < glob.size()) {
    char c = glob[i];
    if (c == '*') {
      if (glob.compare(i, 3, "**/") == 0) {
        re += "(.*/)?";
        i += 3;
        continue;
      }
      if (glob.compare(i, 2, "**") == 0) {
        re += ".*";
        i += 2;
        continue;
      }
      re += "[^/]*";
      ++i;
      continue;
    }
    if (c == '?') {
      re += "[^/]";
      ++i;
      continue;
    }
    static const std::string kSpecial = "\\^$.|+()[]{}";
    if (kSpecial.find(c) != std::string::npos) re += '\\';
    re += c;
    ++i;
  }
  return std::regex(re);
}

inline std::string generic_path(const std::filesystem::path& p) {
  return p.generic_string();
}

}  // namespace detail

/// Recursive `*.dart` discovery over files and directories, with glob
/// excludes. Explicitly named files are always included. The result is
/// sorted and de-duplicated so every downstream stage is order-stable.
inline std::vector<std::string> discover_files(const std::vector<std::string>& paths,
                                               const std::vector<std::string>& excludes) {
  std::vector<std::regex> rxs;
  rxs.reserve(excludes.size());
  for (const auto& g : excludes) rxs.push_back(detail::glob_to_regex(g));
  auto excluded = [&](const std::string& p) {
    for (const auto& rx : rxs)
      if (std::regex_match(p, rx)) return true;
    return false;
  };

  std::vector<std::string> files;
  for (const auto& raw : paths) {
    std::filesystem::path p(raw);
    if (std::filesystem::is_directory(p)) {
      for (auto it = std::filesystem::recursive_directory_iterator(p);
           it != std::filesystem::recursive_directory_iterator(); ++it) {
        if (!it->is_regular_file()) continue;
        if (it->path().extension() != ".dart") continue;
        std::string gp = detail::generic_path(it->path());
        if (excluded(gp)) continue;
        files.push_back(gp);
      }
    } else if (std::filesystem::is_regular_file(p)) {
      files.push_back(detail::generic_path(p));
    }
  }
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  return files;
}

/// The whole single-file pipeline: lex, extract units, detect, score.
/// Lex/structure failures are per-file and non-fatal to a multi-file run.
inline FileAnalysis analyze_source(std::string path, std::string source, const IcpTable& table) {
  FileAnalysis fa;
  fa.path = path;
  fa.source = std::move(source);

  LexResult lex = tokenize(fa.source, fa.path);
  fa.tokens = std::move(lex.tokens);
  if (lex.failed) {
    fa.status = FileStatus::LexFailed;
    fa.error = lex.error;
    return fa;
  }
  ExtractResult ext = extract_units(fa.tokens);
  if (ext.structure_failed) {
    fa.status = FileStatus::StructureFailed;
    fa.error = "unbalanced braces";
    return fa;
  }
  fa.units = std::move(ext.units);
  for (CodeUnit& u : fa.units) u.loc = count_loc(u, fa.tokens);

  FileContext ctx = build_file_context(fa.tokens, fa.units);
  for (const CodeUnit& u : fa.units) {
    fa.findings.push_back(detect(u, fa.tokens, table, ctx));
    fa.unit_reports.push_back(score_unit(fa.findings.back(), u, table));
  }
  return fa;
}

inline FileAnalysis analyze_file(const std::string& path, const IcpTable& table) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    FileAnalysis fa;
    fa.path = path;
    fa.status = FileStatus::IoFailed;
    fa.error = "cannot read file";
    return fa;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return analyze_source(path, buf.str(), table);
}

struct ProjectAnalysis {
  std::vector<FileAnalysis> files;          // in discovery (sorted) order
  ProjectReport report;
  std::vector<SplitPlan> suggestions;       // for over-limit units, when requested
  int failed_files = 0;

  bool has_failures() const { return failed_files > 0; }
};

/// Analyze a file set file-parallel with a deterministic merge: results land
/// in discovery order no matter which worker finishes first, so serial and
/// parallel runs emit identical reports.
inline ProjectAnalysis analyze_project(const std::vector<std::string>& files,
                                       const AnalysisOptions& options) {
  ProjectAnalysis pa;
  pa.files.resize(files.size());

  unsigned jobs = options.jobs > 0 ? static_cast<unsigned>(options.jobs)
                                   : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, files.size() == 0 ? 1 : static_cast<unsigned>(files.size()));

  if (jobs <= 1) {
    for (std::size_t i = 0; i < files.size(); ++i)
      pa.files[i] = analyze_file(files[i], options.table);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&]() {
        while (true) {
          std::size_t i = next.fetch_add(1);
          if (i >= files.size()) break;
          pa.files[i] = analyze_file(files[i], options.table);
        }
      });
    }
    for (auto& t : workers) t.join();
  }

  std::vector<UnitReport> all_reports;
  for (FileAnalysis& fa : pa.files) {
    if (fa.status != FileStatus::Ok) {
      ++pa.failed_files;
      continue;
    }
    for (const UnitReport& r : fa.unit_reports) all_reports.push_back(r);
  }
  pa.report = aggregate(std::move(all_reports), options.table);

  if (options.suggest) {
    for (const FileAnalysis& fa : pa.files) {
      if (fa.status != FileStatus::Ok) continue;
      for (std::size_t i = 0; i < fa.units.size(); ++i) {
        if (!fa.unit_reports[i].over_limit) continue;
        pa.suggestions.push_back(suggest_split(fa.units[i], fa.findings[i], options.table));
      }
    }
  }
  return pa;
}

}  // namespace cddlint
