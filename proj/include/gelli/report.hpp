#pragma once

#include <sstream>
#include <string>

#include "gelli/assemble.hpp"
#include "gelli/model.hpp"

namespace gelli {

inline std::string graded_str(const GradedInvariant& g,
                              const std::string& indent = "  ") {
  std::ostringstream out;
  if (g.entries().empty()) {
    out << indent << "all groups are 0\n";
    return out.str();
  }
  for (auto it = g.entries().rbegin(); it != g.entries().rend(); ++it) {
    out << indent << "H_" << it->first << " ≅ ";
    if (it->second.resolved) {
      out << canonical_str(it->second.group.canonical());
    } else {
      out << "extension of " << canonical_str(it->second.quotient.canonical())
          << " by " << canonical_str(it->second.sub.canonical());
    }
    out << "\n";
  }
  return out.str();
}

inline std::string hk_status_str(const HkVerdict& v) {
  switch (v.status) {
    case HkStatus::Good:
      return "GOOD";
    case HkStatus::NotGood:
      return "NOT_GOOD";
    default:
      return "UNDECIDED";
  }
}

inline std::string hk_layer_str(HkLayer layer) {
  switch (layer) {
    case HkLayer::Group:
      return "group";
    case HkLayer::Unit:
      return "unit";
    case HkLayer::Pairing:
      return "pairing";
    default:
      return "none";
  }
}

inline std::string invariant_str(const EllInvariant& inv,
                                 const std::string& indent = "  ") {
  std::ostringstream out;
  out << indent << "even ≅ " << group_str(inv.even) << ", odd ≅ "
      << group_str(inv.odd) << "\n";
  out << indent << "unit = (";
  for (std::size_t i = 0; i < inv.unit.size(); ++i)
    out << (i ? ", " : "") << inv.unit[i].get_str();
  out << ")\n";
  for (const TraceFunctional& t : inv.traces) {
    out << indent << "pairing " << t.name << " = (";
    for (std::size_t i = 0; i < t.values.size(); ++i)
      out << (i ? ", " : "") << realexpr_str(t.values[i]);
    out << ")\n";
  }
  return out.str();
}

inline Json graded_json(const GradedInvariant& g) {
  Json out = Json::array();
  for (auto it = g.entries().rbegin(); it != g.entries().rend(); ++it) {
    Json e;
    e["degree"] = it->first;
    if (it->second.resolved) {
      e["group"] = canonical_str(it->second.group.canonical());
    } else {
      e["extension_sub"] = canonical_str(it->second.sub.canonical());
      e["extension_quotient"] = canonical_str(it->second.quotient.canonical());
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace gelli
