#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace cddlint {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CategoryId {
  BranchesLoops,
  Coupling,
  Nullable,
  AsyncFunction,
  AsyncWidget,
  StateMgmt,
  AnimatedWidget,
  BasicWidget,
};

/// Canonical category order, used for annotation lines and JSON output.
inline constexpr std::array<CategoryId, 8> kCategoryOrder = {
    CategoryId::BranchesLoops, CategoryId::Coupling,       CategoryId::Nullable,
    CategoryId::AsyncFunction, CategoryId::AsyncWidget,    CategoryId::StateMgmt,
    CategoryId::AnimatedWidget, CategoryId::BasicWidget,
};

inline std::string_view category_name(CategoryId id) {
  switch (id) {
    case CategoryId::BranchesLoops: return "branches_loops";
    case CategoryId::Coupling: return "coupling";
    case CategoryId::Nullable: return "nullable";
    case CategoryId::AsyncFunction: return "async_function";
    case CategoryId::AsyncWidget: return "async_widget";
    case CategoryId::StateMgmt: return "state_mgmt";
    case CategoryId::AnimatedWidget: return "animated_widget";
    case CategoryId::BasicWidget: return "basic_widget";
  }
  return "?";
}

inline std::optional<CategoryId> category_from_name(std::string_view name) {
  for (CategoryId id : kCategoryOrder)
    if (category_name(id) == name) return id;
  return std::nullopt;
}

struct IcpSubitem {
  std::string id;  // "default" when the category has no split
  int weight = 1;

  friend bool operator==(const IcpSubitem&, const IcpSubitem&) = default;
};

/// Detector tuning knobs. Which keys apply depends on the category; loading
/// rejects keys a category's detector does not consume.
struct DetectorParams {
  std::vector<std::string> service_type_patterns;  // coupling: full-match regexes on type names
  std::vector<std::string> other_lib_patterns;     // state_mgmt: idents or dotted pairs
  std::vector<std::string> other_lib_imports;      // state_mgmt: package names gating other_lib
  std::vector<std::string> animated_patterns;      // animated_widget: Name, Prefix*, *Suffix
  std::vector<std::string> widget_names;           // basic_widget: exact idents
  bool count_notify_listeners = true;              // state_mgmt: count notifyListeners() calls

  friend bool operator==(const DetectorParams&, const DetectorParams&) = default;
};

inline DetectorParams default_params(CategoryId id) {
  DetectorParams p;
  switch (id) {
    case CategoryId::Coupling:
      p.service_type_patterns = {".*Service$", ".*Repository$", ".*Controller$", ".*Client$",
                                 ".*Api$"};
      break;
    case CategoryId::StateMgmt:
      p.other_lib_patterns = {"Bloc", "Cubit", "BlocBuilder", "BlocProvider",
                              "Obx",  "GetX",  "ref.watch",   "ref.read"};
      p.other_lib_imports = {"bloc",     "flutter_bloc",     "hydrated_bloc", "get",
                             "riverpod", "flutter_riverpod", "hooks_riverpod", "mobx",
                             "flutter_mobx", "redux", "flutter_redux"};
      break;
    case CategoryId::AnimatedWidget:
      p.animated_patterns = {"Animated*", "*Transition", "AnimationController", "Tween"};
      break;
    case CategoryId::BasicWidget:
      p.widget_names = {"Container", "Row",      "Column",  "Text",     "Stack",
                        "ListView",  "Scaffold", "Padding", "SizedBox", "Center"};
      break;
    default:
      break;
  }
  return p;
}

struct IcpCategory {
  CategoryId id = CategoryId::BranchesLoops;
  std::vector<IcpSubitem> subitems;
  DetectorParams params;

  const IcpSubitem* find_subitem(std::string_view sub) const {
    for (const auto& s : subitems)
      if (s.id == sub) return &s;
    return nullptr;
  }

  bool single_default() const { return subitems.size() == 1 && subitems[0].id == "default"; }

  friend bool operator==(const IcpCategory&, const IcpCategory&) = default;
};

/// A versioned ICP table: category/subitem weights plus the per-unit limit.
struct IcpTable {
  std::string name;
  std::string version;
  int limit = 7;
  std::vector<IcpCategory> categories;

  const IcpCategory* find(CategoryId id) const {
    for (const auto& c : categories)
      if (c.id == id) return &c;
    return nullptr;
  }

  std::optional<int> weight(CategoryId id, std::string_view subitem) const {
    const IcpCategory* c = find(id);
    if (!c) return std::nullopt;
    const IcpSubitem* s = c->find_subitem(subitem);
    if (!s) return std::nullopt;
    return s->weight;
  }

  friend bool operator==(const IcpTable&, const IcpTable&) = default;
};

namespace detail {

inline IcpCategory make_category(CategoryId id, std::vector<IcpSubitem> subs) {
  IcpCategory c;
  c.id = id;
  c.subitems = std::move(subs);
  c.params = default_params(id);
  return c;
}

}  // namespace detail

inline std::vector<std::string> preset_names() {
  return {"suggested", "team-v1", "team-v2", "team-v3"};
}

/// The four built-in tables. `suggested` is the starter collection (its limit
/// defaults to 7, the upper end of the recommended 3..7 range for mixed-
/// experience teams); team-v1/v2/v3 are the successive team revisions with
/// limits 32, 30 and 13.
inline IcpTable preset(std::string_view name) {
  using detail::make_category;
  IcpTable t;
  t.name = std::string(name);
  if (name == "suggested") {
    t.version = "1";
    t.limit = 7;
    t.categories = {
        make_category(CategoryId::BranchesLoops, {{"default", 1}}),
        make_category(CategoryId::Coupling, {{"default", 1}}),
        make_category(CategoryId::Nullable, {{"default", 1}}),
        make_category(CategoryId::AsyncFunction, {{"default", 2}}),
        make_category(CategoryId::AsyncWidget, {{"default", 2}}),
        make_category(CategoryId::StateMgmt, {{"default", 2}}),
        make_category(CategoryId::AnimatedWidget, {{"default", 2}}),
    };
    return t;
  }
  if (name == "team-v1") {
    t.version = "1";
    t.limit = 32;
    t.categories = {
        make_category(CategoryId::BranchesLoops, {{"default", 1}}),
        make_category(CategoryId::BasicWidget, {{"default", 1}}),
        make_category(CategoryId::Coupling, {{"default", 2}}),
        make_category(CategoryId::AsyncFunction, {{"default", 3}}),
        make_category(CategoryId::AsyncWidget, {{"default", 2}}),
        make_category(CategoryId::StateMgmt, {{"default", 3}}),
        make_category(CategoryId::AnimatedWidget, {{"default", 1}}),
    };
    return t;
  }
  if (name == "team-v2") {
    t.version = "2";
    t.limit = 30;
    t.categories = {
        make_category(CategoryId::BranchesLoops, {{"default", 1}}),
        make_category(CategoryId::Coupling, {{"default", 2}}),
        make_category(CategoryId::AsyncFunction, {{"default", 3}}),
        make_category(CategoryId::AsyncWidget, {{"default", 2}}),
        make_category(CategoryId::StateMgmt, {{"default", 3}}),
        make_category(CategoryId::AnimatedWidget, {{"default", 1}}),
    };
    return t;
  }
  if (name == "team-v3") {
    t.version = "3";
    t.limit = 13;
    t.categories = {
        make_category(CategoryId::BranchesLoops, {{"default", 1}}),
        make_category(CategoryId::Coupling, {{"default", 1}}),
        make_category(CategoryId::AsyncFunction, {{"create", 1}, {"handle", 2}}),
        make_category(CategoryId::AsyncWidget, {{"default", 2}}),
        make_category(CategoryId::StateMgmt, {{"notifier", 1}, {"consumer", 2}, {"other_lib", 3}}),
    };
    return t;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "' (expected one of: suggested, "
                    "team-v1, team-v2, team-v3)");
}

namespace detail {

inline const std::vector<std::string>& allowed_param_keys(CategoryId id) {
  static const std::vector<std::string> kNone;
  static const std::vector<std::string> kCoupling = {"service_type_patterns"};
  static const std::vector<std::string> kState = {"other_lib_patterns", "other_lib_imports",
                                                  "count_notify_listeners"};
  static const std::vector<std::string> kAnimated = {"animated_patterns"};
  static const std::vector<std::string> kBasic = {"widget_names"};
  switch (id) {
    case CategoryId::Coupling: return kCoupling;
    case CategoryId::StateMgmt: return kState;
    case CategoryId::AnimatedWidget: return kAnimated;
    case CategoryId::BasicWidget: return kBasic;
    default: return kNone;
  }
}

inline std::vector<std::string> string_list(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw ConfigError(where + ": expected an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace detail

/// Build a table from the config JSON schema
/// `{name, version, limit, categories:[{id, subitems:[{id, weight}], params:{...}}]}`.
inline IcpTable table_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": config root must be an object");
  IcpTable t;
  if (!j.contains("name") || !j["name"].is_string())
    throw ConfigError(where + ": missing string field 'name'");
  t.name = j["name"].get<std::string>();
  t.version = j.value("version", std::string("1"));
  if (!j.contains("limit") || !j["limit"].is_number_integer())
    throw ConfigError(where + ": missing integer field 'limit'");
  t.limit = j["limit"].get<int>();
  if (t.limit <= 0) throw ConfigError(where + ": 'limit' must be a positive integer");
  if (!j.contains("categories") || !j["categories"].is_array())
    throw ConfigError(where + ": missing array field 'categories'");

  for (const auto& cj : j["categories"]) {
    if (!cj.is_object() || !cj.contains("id") || !cj["id"].is_string())
      throw ConfigError(where + ": every category needs a string 'id'");
    const std::string id_name = cj["id"].get<std::string>();
    auto id = category_from_name(id_name);
    if (!id) throw ConfigError(where + ": unknown category '" + id_name + "'");
    if (t.find(*id)) throw ConfigError(where + ": duplicate category '" + id_name + "'");

    IcpCategory cat;
    cat.id = *id;
    cat.params = default_params(*id);
    if (!cj.contains("subitems") || !cj["subitems"].is_array() || cj["subitems"].empty())
      throw ConfigError(where + ": category '" + id_name + "' needs a non-empty 'subitems' array");
    for (const auto& sj : cj["subitems"]) {
      if (!sj.is_object() || !sj.contains("id") || !sj["id"].is_string() ||
          !sj.contains("weight") || !sj["weight"].is_number_integer())
        throw ConfigError(where + ": category '" + id_name +
                          "': subitems must be {id: string, weight: integer}");
      IcpSubitem sub{sj["id"].get<std::string>(), sj["weight"].get<int>()};
      if (sub.weight <= 0)
        throw ConfigError(where + ": category '" + id_name + "', subitem '" + sub.id +
                          "': weight must be a positive integer");
      if (cat.find_subitem(sub.id))
        throw ConfigError(where + ": category '" + id_name + "': duplicate subitem '" + sub.id +
                          "'");
      cat.subitems.push_back(std::move(sub));
    }
    if (cj.contains("params")) {
      if (!cj["params"].is_object())
        throw ConfigError(where + ": category '" + id_name + "': 'params' must be an object");
      const auto& allowed = detail::allowed_param_keys(*id);
      for (const auto& [key, value] : cj["params"].items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
          throw ConfigError(where + ": category '" + id_name + "': unknown params key '" + key +
                            "'");
        const std::string ctx = where + ": " + id_name + ".params." + key;
        if (key == "service_type_patterns")
          cat.params.service_type_patterns = detail::string_list(value, ctx);
        else if (key == "other_lib_patterns")
          cat.params.other_lib_patterns = detail::string_list(value, ctx);
        else if (key == "other_lib_imports")
          cat.params.other_lib_imports = detail::string_list(value, ctx);
        else if (key == "animated_patterns")
          cat.params.animated_patterns = detail::string_list(value, ctx);
        else if (key == "widget_names")
          cat.params.widget_names = detail::string_list(value, ctx);
        else if (key == "count_notify_listeners") {
          if (!value.is_boolean()) throw ConfigError(ctx + ": expected a boolean");
          cat.params.count_notify_listeners = value.get<bool>();
        }
      }
    }
    t.categories.push_back(std::move(cat));
  }
  if (t.categories.empty()) throw ConfigError(where + ": 'categories' must not be empty");
  return t;
}

inline nlohmann::ordered_json table_to_json(const IcpTable& t) {
  nlohmann::ordered_json j;
  j["name"] = t.name;
  j["version"] = t.version;
  j["limit"] = t.limit;
  j["categories"] = nlohmann::ordered_json::array();
  for (const auto& cat : t.categories) {
    nlohmann::ordered_json cj;
    cj["id"] = std::string(category_name(cat.id));
    cj["subitems"] = nlohmann::ordered_json::array();
    for (const auto& sub : cat.subitems)
      cj["subitems"].push_back({{"id", sub.id}, {"weight", sub.weight}});
    nlohmann::ordered_json pj = nlohmann::ordered_json::object();
    const DetectorParams defaults = default_params(cat.id);
    if (cat.params.service_type_patterns != defaults.service_type_patterns)
      pj["service_type_patterns"] = cat.params.service_type_patterns;
    if (cat.params.other_lib_patterns != defaults.other_lib_patterns)
      pj["other_lib_patterns"] = cat.params.other_lib_patterns;
    if (cat.params.other_lib_imports != defaults.other_lib_imports)
      pj["other_lib_imports"] = cat.params.other_lib_imports;
    if (cat.params.animated_patterns != defaults.animated_patterns)
      pj["animated_patterns"] = cat.params.animated_patterns;
    if (cat.params.widget_names != defaults.widget_names)
      pj["widget_names"] = cat.params.widget_names;
    if (cat.params.count_notify_listeners != defaults.count_notify_listeners)
      pj["count_notify_listeners"] = cat.params.count_notify_listeners;
    if (!pj.empty()) cj["params"] = pj;
    j["categories"].push_back(cj);
  }
  return j;
}

inline IcpTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "': " + e.what());
  }
  return table_from_json(j, path.string());
}

inline void save_table(const IcpTable& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write config file '" + path.string() + "'");
  out << table_to_json(t).dump(2) << "\n";
}

}  // namespace cddlint
