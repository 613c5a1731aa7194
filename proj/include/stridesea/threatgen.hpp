#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stridesea/error.hpp"
#include "stridesea/model.hpp"
#include "stridesea/stride.hpp"
#include "stridesea/textio/csv.hpp"

namespace stridesea::threatgen {

enum class SubjectKind { kExternalEntity = 0, kProcess, kDataStore, kDataFlow };

inline constexpr std::array<SubjectKind, 4> kAllSubjectKinds = {
    SubjectKind::kExternalEntity, SubjectKind::kProcess, SubjectKind::kDataStore,
    SubjectKind::kDataFlow};

constexpr std::string_view kind_name(SubjectKind k) {
  switch (k) {
    case SubjectKind::kExternalEntity: return "external-entity";
    case SubjectKind::kProcess: return "process";
    case SubjectKind::kDataStore: return "data-store";
    case SubjectKind::kDataFlow: return "data-flow";
  }
  return "";
}

constexpr SubjectKind subject_kind(ElementKind k) {
  switch (k) {
    case ElementKind::kExternalEntity: return SubjectKind::kExternalEntity;
    case ElementKind::kProcess: return SubjectKind::kProcess;
    case ElementKind::kDataStore: return SubjectKind::kDataStore;
  }
  return SubjectKind::kProcess;
}

struct RuleTable {
  std::array<CategorySet, 4> categories;

  const CategorySet& operator[](SubjectKind k) const {
    return categories[static_cast<std::size_t>(k)];
  }
  CategorySet& operator[](SubjectKind k) { return categories[static_cast<std::size_t>(k)]; }
  bool operator==(const RuleTable&) const = default;
};

// STRIDE-per-element defaults.
inline RuleTable default_rules() {
  using C = StrideCategory;
  RuleTable t;
  t[SubjectKind::kExternalEntity] = {C::kSpoofing, C::kRepudiation};
  t[SubjectKind::kProcess] = {C::kSpoofing,
                              C::kTampering,
                              C::kRepudiation,
                              C::kInformationDisclosure,
                              C::kDenialOfService,
                              C::kElevationOfPrivilege};
  t[SubjectKind::kDataStore] = {C::kTampering, C::kRepudiation, C::kInformationDisclosure,
                                C::kDenialOfService};
  t[SubjectKind::kDataFlow] = {C::kTampering, C::kInformationDisclosure, C::kDenialOfService};
  return t;
}

// Rows `kind,categories`, e.g. `process,STRIDE`. Unmentioned kinds keep the
// defaults.
inline RuleTable load_rules(std::string_view text, const std::string& file = "<input>") {
  RuleTable table = default_rules();
  std::set<std::string> seen;
  for (const auto& row : textio::read_csv(text, file)) {
    if (row.cells.size() != 2)
      throw ParseError(row.span, "2 cells", std::to_string(row.cells.size()) + " cells");
    const auto& kind_cell = row.cells[0];
    const auto& cats_cell = row.cells[1];
    if (kind_cell.text == "kind" && cats_cell.text == "categories") continue;  // optional header
    auto kind = std::find_if(kAllSubjectKinds.begin(), kAllSubjectKinds.end(),
                             [&](SubjectKind k) { return kind_name(k) == kind_cell.text; });
    if (kind == kAllSubjectKinds.end())
      throw ParseError(kind_cell.span, "element kind", "unknown kind " + kind_cell.text);
    if (!seen.insert(kind_cell.text).second)
      throw ParseError(kind_cell.span, "one row per kind", "duplicate kind " + kind_cell.text);
    CategorySet set;
    for (std::size_t i = 0; i < cats_cell.text.size(); ++i) {
      auto c = category_from_letter(cats_cell.text[i]);
      if (!c) {
        SourceSpan at = cats_cell.span;
        at.column += static_cast<int>(i);
        throw ParseError(at, "category letter S, T, R, I, D or E",
                         "unknown category " + std::string(1, cats_cell.text[i]));
      }
      set.insert(*c);
    }
    if (set.empty()) throw ParseError(cats_cell.span, "at least one category", "empty cell");
    table[*kind] = set;
  }
  return table;
}

enum class Scope { kAll, kBoundary };

struct ThreatSet {
  std::vector<Threat> threats;
  Scope scope = Scope::kAll;
  bool operator==(const ThreatSet&) const = default;
};

inline std::string threat_title(StrideCategory c, const ThreatSubject& s) {
  return std::string(display_name(c)) + (s.is_flow ? " against " : " of ") + s.label();
}

// One threat per (subject, category) allowed by the rule table, sorted by
// subject name then S,T,R,I,D,E, numbered from 1.
inline ThreatSet generate_threats(const SystemModel& model, const RuleTable& rules,
                                  Scope scope = Scope::kAll) {
  std::map<std::string, const Element*> elements;
  for (const auto& e : model.elements) elements.emplace(e.name, &e);
  auto boundary_of = [&](const std::string& name) -> std::optional<std::string> {
    auto it = elements.find(name);
    return it == elements.end() ? std::nullopt : it->second->boundary;
  };

  std::set<std::string> crossing_elements;
  std::vector<Threat> out;
  for (const auto& f : model.flows) {
    const bool crossing = boundary_of(f.source) != boundary_of(f.target);
    if (crossing) {
      crossing_elements.insert(f.source);
      crossing_elements.insert(f.target);
    }
    ThreatSubject subject{true, f.name, f.source, f.target};
    for (auto c : kAllCategories)
      if (rules[SubjectKind::kDataFlow].contains(c))
        out.push_back({0, c, subject, threat_title(c, subject), crossing});
  }
  for (const auto& e : model.elements) {
    ThreatSubject subject{false, e.name, "", ""};
    const bool crossing = crossing_elements.contains(e.name);
    for (auto c : kAllCategories)
      if (rules[subject_kind(e.kind)].contains(c))
        out.push_back({0, c, subject, threat_title(c, subject), crossing});
  }

  std::sort(out.begin(), out.end(), [](const Threat& a, const Threat& b) {
    if (a.subject.sort_key() != b.subject.sort_key()) return a.subject.sort_key() < b.subject.sort_key();
    return index_of(a.category) < index_of(b.category);
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<int>(i + 1);

  ThreatSet set;
  set.scope = scope;
  for (auto& t : out)
    if (scope == Scope::kAll || t.boundary_crossing) set.threats.push_back(std::move(t));
  return set;
}

inline constexpr std::string_view kUnassigned = "(unassigned)";

// Flow threats attach to the carried asset; element threats attach to every
// asset carried by an incident flow. Anything else lands under "(unassigned)".
inline std::map<std::string, std::vector<Threat>> threats_by_asset(const ThreatSet& set,
                                                                   const SystemModel& model) {
  std::map<std::string, std::set<std::string>> element_assets;
  for (const auto& f : model.flows) {
    if (!f.carries) continue;
    element_assets[f.source].insert(*f.carries);
    element_assets[f.target].insert(*f.carries);
  }
  std::map<std::string, std::vector<Threat>> out;
  for (const auto& t : set.threats) {
    std::set<std::string> assets;
    if (t.subject.is_flow) {
      for (const auto& f : model.flows)
        if (f.name == t.subject.name && f.source == t.subject.source &&
            f.target == t.subject.target && f.carries)
          assets.insert(*f.carries);
    } else if (auto it = element_assets.find(t.subject.name); it != element_assets.end()) {
      assets = it->second;
    }
    if (assets.empty()) assets.insert(std::string(kUnassigned));
    for (const auto& a : assets) out[a].push_back(t);
  }
  return out;
}

}  // namespace stridesea::threatgen
