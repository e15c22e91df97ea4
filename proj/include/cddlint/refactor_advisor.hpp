#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "cddlint/icp_config.hpp"
#include "cddlint/icp_rules.hpp"
#include "cddlint/unit_extractor.hpp"

namespace cddlint {

/// A componentization proposal for one over-limit unit. Members are packed
/// first-fit-decreasing into bins of capacity `limit`; the original unit acts
/// as the first bin and keeps every class-level finding (extends/with clauses
/// and anything else outside a member), since those cannot move. Members whose
/// own weight already exceeds the limit cannot be fixed by extraction and are
/// reported as irreducible instead of being placed.
struct SplitPlan {
  struct Part {
    std::string suggested_name;        // <UnitName>Part1..N
    std::vector<int> member_indices;   // indices into the unit's members
    int projected_weighted_total = 0;
  };
  struct Irreducible {
    int member_index = -1;
    int weight = 0;
  };

  std::string unit_name;
  std::string file;
  int limit = 0;
  int original_weighted_total = 0;
  std::vector<Part> proposed_units;
  std::vector<int> residual_members;
  int residual_total = 0;
  std::vector<Irreducible> irreducible;

  bool empty() const {
    return proposed_units.empty() && residual_members.empty() && irreducible.empty();
  }
};

/// Propose a split for a unit scored against `table`. Returns the empty plan
/// when the unit is within the limit. Deterministic: ties break on member
/// order (span start).
inline SplitPlan suggest_split(const CodeUnit& unit, const std::vector<IcpFinding>& findings,
                               const IcpTable& table) {
  SplitPlan plan;
  plan.unit_name = unit.name;
  plan.file = unit.decl_span.file_path;
  plan.limit = table.limit;

  std::vector<int> member_weight(unit.members.size(), 0);
  int locked = 0;  // class-level findings stay with the original unit
  int total = 0;
  for (const IcpFinding& f : findings) {
    auto w = table.weight(f.category, f.subitem);
    int weight = w ? *w : 0;
    total += weight;
    if (f.member_index >= 0 && f.member_index < static_cast<int>(member_weight.size()))
      member_weight[f.member_index] += weight;
    else
      locked += weight;
  }
  plan.original_weighted_total = total;
  if (total <= table.limit) return plan;

  struct Item {
    int member_index;
    int weight;
  };
  std::vector<Item> items;
  for (int i = 0; i < static_cast<int>(member_weight.size()); ++i)
    items.push_back({i, member_weight[i]});
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& a, const Item& b) { return a.weight > b.weight; });

  struct Bin {
    int load = 0;
    std::vector<int> members;
  };
  std::vector<Bin> bins;
  bins.push_back({locked, {}});  // bin 0 is the residual unit

  for (const Item& item : items) {
    if (item.weight > table.limit) {
      plan.irreducible.push_back({item.member_index, item.weight});
      continue;
    }
    if (item.weight == 0) {  // weightless members have no reason to move
      bins[0].members.push_back(item.member_index);
      continue;
    }
    bool placed = false;
    for (Bin& bin : bins) {
      if (bin.load + item.weight <= table.limit) {
        bin.load += item.weight;
        bin.members.push_back(item.member_index);
        placed = true;
        break;
      }
    }
    if (!placed) bins.push_back({item.weight, {item.member_index}});
  }

  std::sort(bins[0].members.begin(), bins[0].members.end());
  plan.residual_members = bins[0].members;
  plan.residual_total = bins[0].load;
  for (std::size_t b = 1; b < bins.size(); ++b) {
    SplitPlan::Part part;
    part.suggested_name = unit.name + "Part" + std::to_string(b);
    std::sort(bins[b].members.begin(), bins[b].members.end());
    part.member_indices = bins[b].members;
    part.projected_weighted_total = bins[b].load;
    plan.proposed_units.push_back(std::move(part));
  }
  return plan;
}

}  // namespace cddlint
