#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cddlint/icp_config.hpp"
#include "cddlint/refactor_advisor.hpp"
#include "cddlint/scoring.hpp"
#include "cddlint/unit_extractor.hpp"

namespace cddlint {

using Json = nlohmann::ordered_json;

namespace detail {

// Fixed subitem order inside the counts object.
inline int subitem_rank(const std::string& id) {
  static const char* kOrder[] = {"default", "create", "handle", "notifier", "consumer",
                                 "other_lib"};
  for (int i = 0; i < 6; ++i)
    if (id == kOrder[i]) return i;
  return 6;
}

}  // namespace detail

inline Json unit_report_to_json(const UnitReport& r) {
  Json j;
  j["name"] = r.unit_name;
  j["kind"] = unit_kind_name(r.unit_kind);
  j["file"] = r.file;
  j["line"] = r.span.line_start;
  j["loc"] = r.loc;
  Json counts = Json::object();
  for (CategoryId id : kCategoryOrder) {
    std::vector<std::pair<std::string, int>> subs;
    for (const auto& [key, count] : r.counts)
      if (key.first == id) subs.emplace_back(key.second, count);
    if (subs.empty()) continue;
    std::sort(subs.begin(), subs.end(), [](const auto& a, const auto& b) {
      int ra = detail::subitem_rank(a.first), rb = detail::subitem_rank(b.first);
      if (ra != rb) return ra < rb;
      return a.first < b.first;
    });
    Json sj = Json::object();
    for (const auto& [sub, count] : subs) sj[sub] = count;
    counts[std::string(category_name(id))] = sj;
  }
  j["counts"] = counts;
  j["weighted_total"] = r.weighted_total;
  j["limit"] = r.limit;
  j["over_limit"] = r.over_limit;
  return j;
}

inline Json split_plan_to_json(const SplitPlan& plan, const std::vector<MemberSpan>& members) {
  auto member_name = [&](int idx) {
    if (idx < 0 || idx >= static_cast<int>(members.size())) return std::string("<none>");
    const MemberSpan& m = members[idx];
    return m.name.empty() ? std::string("<unnamed@") + std::to_string(m.span.line_start) + ">"
                          : m.name;
  };
  Json j;
  j["unit"] = plan.unit_name;
  j["file"] = plan.file;
  j["limit"] = plan.limit;
  j["original_weighted_total"] = plan.original_weighted_total;
  j["proposed_units"] = Json::array();
  for (const auto& part : plan.proposed_units) {
    Json pj;
    pj["name"] = part.suggested_name;
    pj["members"] = Json::array();
    for (int idx : part.member_indices) pj["members"].push_back(member_name(idx));
    pj["projected_weighted_total"] = part.projected_weighted_total;
    j["proposed_units"].push_back(pj);
  }
  j["residual_members"] = Json::array();
  for (int idx : plan.residual_members) j["residual_members"].push_back(member_name(idx));
  j["residual_total"] = plan.residual_total;
  j["irreducible"] = Json::array();
  for (const auto& ir : plan.irreducible)
    j["irreducible"].push_back({{"member", member_name(ir.member_index)}, {"weight", ir.weight}});
  return j;
}

/// Fixed-name project report schema; this JSON is also the `compare` input.
inline Json project_report_to_json(const ProjectReport& r) {
  Json j;
  j["table"] = {{"name", r.table_name}, {"version", r.table_version}};
  j["class_count"] = r.class_count;
  j["unit_count"] = static_cast<int>(r.unit_reports.size());
  j["total_loc"] = r.total_loc;
  j["avg_loc"] = r.avg_loc;
  j["top3_avg_loc"] = r.top3_avg_loc;
  j["total_weighted_icp"] = r.total_weighted_icp;
  j["violations"] = r.violations;
  if (!r.timestamp.empty()) j["timestamp"] = r.timestamp;
  j["units"] = Json::array();
  for (const UnitReport& u : r.unit_reports) j["units"].push_back(unit_report_to_json(u));
  return j;
}

/// Parse a report produced by project_report_to_json. Snapshot aggregates are
/// read as stored; `units` may be absent or partial (foreign snapshots carry
/// only the summary).
inline ProjectReport project_report_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": report root must be an object");
  ProjectReport r;
  if (!j.contains("table") || !j["table"].is_object() || !j["table"].contains("name"))
    throw ConfigError(where + ": missing 'table.name'");
  r.table_name = j["table"]["name"].get<std::string>();
  r.table_version = j["table"].value("version", std::string());
  auto need_num = [&](const char* key) -> double {
    if (!j.contains(key) || !j[key].is_number())
      throw ConfigError(where + ": missing numeric field '" + std::string(key) + "'");
    return j[key].get<double>();
  };
  r.class_count = static_cast<int>(need_num("class_count"));
  r.total_loc = j.contains("total_loc") ? j["total_loc"].get<int>() : 0;
  r.avg_loc = need_num("avg_loc");
  r.top3_avg_loc = need_num("top3_avg_loc");
  r.total_weighted_icp = static_cast<int>(need_num("total_weighted_icp"));
  if (j.contains("violations")) {
    if (!j["violations"].is_array()) throw ConfigError(where + ": 'violations' must be an array");
    for (const auto& v : j["violations"]) r.violations.push_back(v.get<std::string>());
  }
  r.timestamp = j.value("timestamp", std::string());
  return r;
}

inline ProjectReport load_project_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read report file '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("report '" + path.string() + "': " + e.what());
  }
  return project_report_from_json(j, path.string());
}

inline Json comparison_to_json(const ComparisonReport& c) {
  auto side = [](const ComparisonReport::Side& s) {
    Json j;
    j["table"] = {{"name", s.table_name}, {"version", s.table_version}};
    j["class_count"] = s.class_count;
    j["avg_loc"] = s.avg_loc;
    j["top3_avg_loc"] = s.top3_avg_loc;
    j["total_weighted_icp"] = s.total_weighted_icp;
    j["violations"] = s.violation_count;
    return j;
  };
  auto delta = [](const std::optional<double>& d) {
    return d ? Json(*d) : Json(nullptr);
  };
  Json j;
  j["before"] = side(c.before);
  j["after"] = side(c.after);
  j["delta_class_count_pct"] = delta(c.delta_class_count_pct);
  j["delta_avg_loc_pct"] = delta(c.delta_avg_loc_pct);
  j["delta_top3_avg_loc_pct"] = delta(c.delta_top3_avg_loc_pct);
  j["delta_total_icp_pct"] = delta(c.delta_total_icp_pct);
  j["delta_violations"] = c.delta_violations;
  if (!c.warnings.empty()) j["warnings"] = c.warnings;
  return j;
}

}  // namespace cddlint
