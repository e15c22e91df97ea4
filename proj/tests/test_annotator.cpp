#include <catch2/catch_amalgamated.hpp>

#include "cddlint/analysis.hpp"
#include "cddlint/annotator.hpp"
#include "support/property_suites.hpp"
#include "support/test_util.hpp"

using namespace cddlint;

namespace {

FileAnalysis analyze_str(const std::string& src, const std::string& preset_name = "team-v3") {
  FileAnalysis fa = analyze_source("t.dart", src, preset(preset_name));
  REQUIRE(fa.status == FileStatus::Ok);
  return fa;
}

}  // namespace

TEST_CASE("annotation line grammar is bit-exact", "[annotator]") {
  SECTION("async view fixture") {
    std::string src =
        cddtest::read_file(cddtest::fixture_dir() / "flutter/async_summary_view.dart");
    FileAnalysis fa = analyze_str(src);
    REQUIRE(fa.unit_reports.size() == 1);
    CHECK(render_annotation(fa.unit_reports[0]) ==
          "// cdd-icp: total=6/13 branches_loops=3 coupling=1 async_widget=1");
  }
  SECTION("zero report") {
    UnitReport r;
    r.limit = 13;
    CHECK(render_annotation(r) == "// cdd-icp: total=0/13");
  }
  SECTION("over-limit total carries no special marker") {
    std::string src = cddtest::read_file(cddtest::fixture_dir() / "flutter/project_details.dart");
    FileAnalysis fa = analyze_str(src);
    REQUIRE(fa.unit_reports.size() == 1);
    std::string line = render_annotation(fa.unit_reports[0]);
    CHECK(line.rfind("// cdd-icp: total=27/13 ", 0) == 0);
  }
  SECTION("categories appear in canonical order with zero counts omitted") {
    UnitReport r;
    r.limit = 30;
    r.counts[{CategoryId::StateMgmt, "default"}] = 2;
    r.counts[{CategoryId::BranchesLoops, "default"}] = 1;
    r.weighted_total = 7;
    CHECK(render_annotation(r) == "// cdd-icp: total=7/30 branches_loops=1 state_mgmt=2");
  }
}

TEST_CASE("annotation parser", "[annotator]") {
  SECTION("round-trips the grammar") {
    auto p = parse_annotation("// cdd-icp: total=6/13 branches_loops=3 coupling=1 async_widget=1");
    REQUIRE(p.has_value());
    CHECK(p->total == 6);
    CHECK(p->limit == 13);
    CHECK(p->counts.at(CategoryId::BranchesLoops) == 3);
    CHECK(p->counts.at(CategoryId::AsyncWidget) == 1);
  }
  SECTION("rejects malformed lines") {
    CHECK_FALSE(parse_annotation("// cdd-icp: totally=6/13").has_value());
    CHECK_FALSE(parse_annotation("// cdd-icp: total=6").has_value());
    CHECK_FALSE(parse_annotation("// cdd-icp: total=6/13 bogus=1").has_value());
    CHECK_FALSE(parse_annotation("// cdd-icp: total=6/13 branches_loops=x").has_value());
    CHECK_FALSE(parse_annotation("// other comment").has_value());
  }
  SECTION("tolerates leading indentation") {
    CHECK(parse_annotation("  // cdd-icp: total=1/7 nullable=1").has_value());
  }
}

TEST_CASE("apply inserts above the declaration and is idempotent", "[annotator]") {
  std::string src =
      "import 'dart:async';\n"
      "\n"
      "class A {\n"
      "  void f(bool c) {\n"
      "    if (c) {}\n"
      "  }\n"
      "}\n";
  FileAnalysis fa = analyze_str(src);
  auto first = apply_annotations(src, fa.unit_reports, AnnotateMode::Write);
  CHECK(first.inserted == 1);
  CHECK(first.output.find("// cdd-icp: total=1/13 branches_loops=1\nclass A {") !=
        std::string::npos);

  FileAnalysis fa2 = analyze_str(first.output);
  auto second = apply_annotations(first.output, fa2.unit_reports, AnnotateMode::Write);
  CHECK_FALSE(second.changed());
  CHECK(second.output == first.output);
}

TEST_CASE("stale annotations are replaced in place", "[annotator]") {
  std::string src =
      "// cdd-icp: total=9/13 branches_loops=9\n"
      "class A {\n"
      "  void f(bool c) {\n"
      "    if (c) {}\n"
      "  }\n"
      "}\n";
  FileAnalysis fa = analyze_str(src);
  auto res = apply_annotations(src, fa.unit_reports, AnnotateMode::Write);
  CHECK(res.replaced == 1);
  CHECK(res.inserted == 0);
  CHECK(res.output.find("total=9/13") == std::string::npos);
  CHECK(res.output.find("total=1/13") != std::string::npos);
}

TEST_CASE("unit on line one gets the annotation as the new first line", "[annotator]") {
  std::string src = "class A { void f(bool c) { if (c) {} } }\n";
  FileAnalysis fa = analyze_str(src);
  auto res = apply_annotations(src, fa.unit_reports, AnnotateMode::Write);
  CHECK(res.output.rfind("// cdd-icp: total=1/13 branches_loops=1\nclass A", 0) == 0);
}

TEST_CASE("apply touches only annotation lines", "[annotator]") {
  std::string src = cddtest::read_file(cddtest::fixture_dir() / "flutter/project_details.dart");
  FileAnalysis fa = analyze_str(src);
  auto res = apply_annotations(src, fa.unit_reports, AnnotateMode::Write);
  std::istringstream before(src), after(res.output);
  std::vector<std::string> before_lines, after_lines;
  std::string line;
  while (std::getline(before, line)) before_lines.push_back(line);
  while (std::getline(after, line))
    if (line.find("// cdd-icp:") == std::string::npos) after_lines.push_back(line);
  CHECK(before_lines == after_lines);
}

TEST_CASE("dry run emits a diff and leaves the file alone", "[annotator]") {
  std::string src = "class A { void f(bool c) { if (c) {} } }\n";
  FileAnalysis fa = analyze_str(src);
  auto res = apply_annotations(src, fa.unit_reports, AnnotateMode::DryRun);
  CHECK(res.inserted == 1);
  CHECK(res.output.find("+// cdd-icp: total=1/13 branches_loops=1") != std::string::npos);
  CHECK(res.output.find("--- a/") != std::string::npos);

  FileAnalysis fa2 = analyze_str(src);
  auto clean = apply_annotations(apply_annotations(src, fa.unit_reports, AnnotateMode::Write).output,
                                 analyze_str(apply_annotations(src, fa.unit_reports,
                                                               AnnotateMode::Write)
                                                 .output)
                                     .unit_reports,
                                 AnnotateMode::DryRun);
  CHECK(clean.output.empty());
  (void)fa2;
}

TEST_CASE("stale analysis aborts", "[annotator]") {
  std::string src = "class Alpha { void f(bool c) { if (c) {} } }\n";
  FileAnalysis fa = analyze_str(src);
  std::string changed = "// moved\n\nclass Beta {}\n";
  CHECK_THROWS_AS(apply_annotations(changed, fa.unit_reports, AnnotateMode::Write),
                  StaleAnalysisError);
}

TEST_CASE("audit reports drift precisely", "[annotator]") {
  std::string src =
      "class A {\n"
      "  void f(bool c) {\n"
      "    if (c) {}\n"
      "    if (!c) {}\n"
      "  }\n"
      "}\n";
  FileAnalysis fa = analyze_str(src);

  SECTION("freshly annotated file has no drift") {
    auto annotated = apply_annotations(src, fa.unit_reports, AnnotateMode::Write);
    CHECK(audit(annotated.output, fa.unit_reports).empty());
  }
  SECTION("tampered count is reported per category") {
    std::string tampered =
        "// cdd-icp: total=5/13 branches_loops=5\n" + src;
    auto drifts = audit(tampered, fa.unit_reports);
    REQUIRE(drifts.size() == 1);
    REQUIRE(drifts[0].annotated_total.has_value());
    CHECK(*drifts[0].annotated_total == 5);
    CHECK(drifts[0].computed_total == 2);
    REQUIRE(drifts[0].per_category_mismatches.size() == 1);
    CHECK(drifts[0].per_category_mismatches[0].category == CategoryId::BranchesLoops);
    CHECK(drifts[0].per_category_mismatches[0].annotated == 5);
    CHECK(drifts[0].per_category_mismatches[0].computed == 2);
  }
  SECTION("missing annotation on a nonzero unit drifts with absent total") {
    auto drifts = audit(src, fa.unit_reports);
    REQUIRE(drifts.size() == 1);
    CHECK_FALSE(drifts[0].annotated_total.has_value());
    CHECK_FALSE(drifts[0].malformed);
  }
  SECTION("missing annotation on a zero unit is fine") {
    std::string zero = "class Z { int x = 1; }\n";
    FileAnalysis fz = analyze_str(zero);
    CHECK(audit(zero, fz.unit_reports).empty());
  }
  SECTION("malformed annotation is flagged") {
    std::string bad = "// cdd-icp: total=oops\n" + src;
    auto drifts = audit(bad, fa.unit_reports);
    REQUIRE(drifts.size() == 1);
    CHECK(drifts[0].malformed);
  }
}

TEST_CASE("re-analysis after annotating scores identically", "[annotator]") {
  std::string src = cddtest::read_file(cddtest::fixture_dir() / "flutter/project_details.dart");
  FileAnalysis fa = analyze_str(src);
  auto annotated = apply_annotations(src, fa.unit_reports, AnnotateMode::Write);
  FileAnalysis fa2 = analyze_str(annotated.output);
  REQUIRE(fa2.unit_reports.size() == fa.unit_reports.size());
  for (std::size_t i = 0; i < fa.unit_reports.size(); ++i) {
    CHECK(fa2.unit_reports[i].weighted_total == fa.unit_reports[i].weighted_total);
    CHECK(fa2.unit_reports[i].counts == fa.unit_reports[i].counts);
    CHECK(fa2.unit_reports[i].loc == fa.unit_reports[i].loc);
  }
}

TEST_CASE("windows line endings survive annotation byte-exactly", "[annotator]") {
  std::string src = "class A {\r\n  void f(bool c) {\r\n    if (c) {}\r\n  }\r\n}\r\n";
  FileAnalysis fa = analyze_str(src);
  auto res = apply_annotations(src, fa.unit_reports, AnnotateMode::Write);
  CHECK(res.output.find("// cdd-icp: total=1/13 branches_loops=1\r\nclass A") !=
        std::string::npos);
  FileAnalysis fa2 = analyze_str(res.output);
  auto res2 = apply_annotations(res.output, fa2.unit_reports, AnnotateMode::Write);
  CHECK(res2.output == res.output);
}

TEST_CASE("annotate/audit round-trip property (smoke)", "[annotator][property]") {
  auto failures = cddtest::prop_annotate_audit_roundtrip(150, 77);
  for (const auto& f : failures) INFO(f);
  CHECK(failures.empty());
}
