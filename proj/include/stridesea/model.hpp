#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "stridesea/error.hpp"
#include "stridesea/stride.hpp"

namespace stridesea {

enum class ElementKind { kExternalEntity, kProcess, kDataStore };

constexpr std::string_view keyword(ElementKind k) {
  switch (k) {
    case ElementKind::kExternalEntity: return "external";
    case ElementKind::kProcess: return "process";
    case ElementKind::kDataStore: return "store";
  }
  return "";
}

constexpr std::string_view kind_name(ElementKind k) {
  switch (k) {
    case ElementKind::kExternalEntity: return "external-entity";
    case ElementKind::kProcess: return "process";
    case ElementKind::kDataStore: return "data-store";
  }
  return "";
}

struct TrustBoundary {
  std::string name;
  bool operator==(const TrustBoundary&) const = default;
};

struct Element {
  std::string name;
  ElementKind kind = ElementKind::kProcess;
  std::optional<std::string> boundary;
  bool operator==(const Element&) const = default;
};

struct DataFlow {
  std::string name;
  std::string source;
  std::string target;
  std::optional<std::string> carries;

  // Flows are identified by the (name, source, target) triple.
  auto identity() const { return std::tie(name, source, target); }
  std::string label() const { return name + " (" + source + " -> " + target + ")"; }
  bool operator==(const DataFlow&) const = default;
};

struct Asset {
  std::string name;
  bool operator==(const Asset&) const = default;
};

struct SecurityObjective {
  std::string name;
  double importance = 1.0;  // raw weight in (0, 1]
  std::optional<std::string> protects;
  bool operator==(const SecurityObjective&) const = default;
};

struct SystemModel {
  std::string name;
  std::vector<TrustBoundary> boundaries;
  std::vector<Element> elements;
  std::vector<DataFlow> flows;
  std::vector<Asset> assets;
  std::vector<SecurityObjective> objectives;

  const Element* find_element(std::string_view n) const {
    for (const auto& e : elements)
      if (e.name == n) return &e;
    return nullptr;
  }
  bool has_asset(std::string_view n) const {
    return std::any_of(assets.begin(), assets.end(), [&](const Asset& a) { return a.name == n; });
  }
  bool has_boundary(std::string_view n) const {
    return std::any_of(boundaries.begin(), boundaries.end(),
                       [&](const TrustBoundary& b) { return b.name == n; });
  }
  const SecurityObjective* find_objective(std::string_view n) const {
    for (const auto& o : objectives)
      if (o.name == n) return &o;
    return nullptr;
  }
  bool operator==(const SystemModel&) const = default;
};

struct Risk {
  std::string name;
  double likelihood = 0.0;
  StrideCategory category = StrideCategory::kTampering;
  std::string asset;
  bool operator==(const Risk&) const = default;
};

// An element, or a flow identified by its (name, source, target) triple.
struct ThreatSubject {
  bool is_flow = false;
  std::string name;
  std::string source;
  std::string target;

  std::string label() const {
    return is_flow ? name + " (" + source + " -> " + target + ")" : name;
  }
  auto sort_key() const { return std::tie(name, is_flow, source, target); }
  bool operator==(const ThreatSubject&) const = default;
};

struct Threat {
  int id = 0;  // 1-based ordinal in canonical order
  StrideCategory category = StrideCategory::kSpoofing;
  ThreatSubject subject;
  std::string title;
  bool boundary_crossing = false;
  bool operator==(const Threat&) const = default;
};

struct Countermeasure {
  std::string name;
  double cost = 1.0;
  bool operator==(const Countermeasure&) const = default;
};

// Named scales. Arbitrary values in [0, 1] are accepted wherever these are.
namespace impact_level {
inline constexpr double kNone = 0.0;
inline constexpr double kPartial = 0.5;
inline constexpr double kFull = 1.0;
}  // namespace impact_level

namespace reduction_level {
inline constexpr double kNone = 0.0;
inline constexpr double kPartial = 0.5;
inline constexpr double kHigh = 0.8;
}  // namespace reduction_level

// Importances scaled to sum to one, order preserved.
inline std::vector<double> normalize_weights(std::span<const double> importances) {
  if (importances.empty()) throw ValidationError("no objectives");
  double total = 0.0;
  for (double w : importances) {
    if (!(w > 0.0 && w <= 1.0)) throw ValidationError("invalid importance");
    total += w;
  }
  std::vector<double> out;
  out.reserve(importances.size());
  for (double w : importances) out.push_back(w / total);
  return out;
}

inline std::vector<double> normalize_weights(std::span<const SecurityObjective> objectives) {
  std::vector<double> raw;
  raw.reserve(objectives.size());
  for (const auto& o : objectives) raw.push_back(o.importance);
  return normalize_weights(std::span<const double>(raw));
}

inline std::vector<Diagnostic> validate_model(const SystemModel& model) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string subject, std::string message) {
    out.push_back({Severity::kError, std::move(subject), std::move(message)});
  };
  auto warning = [&](std::string subject, std::string message) {
    out.push_back({Severity::kWarning, std::move(subject), std::move(message)});
  };

  std::set<std::string> seen;
  for (const auto& b : model.boundaries)
    if (!seen.insert(b.name).second) error(b.name, "duplicate boundary \"" + b.name + "\"");

  seen.clear();
  for (const auto& e : model.elements) {
    if (!seen.insert(e.name).second) error(e.name, "duplicate element \"" + e.name + "\"");
    if (!e.boundary) continue;
    if (e.kind == ElementKind::kExternalEntity)
      error(e.name, "external entity cannot be inside boundary \"" + *e.boundary + "\"");
    else if (!model.has_boundary(*e.boundary))
      error(e.name, "unknown boundary \"" + *e.boundary + "\"");
  }

  seen.clear();
  for (const auto& a : model.assets)
    if (!seen.insert(a.name).second) error(a.name, "duplicate asset \"" + a.name + "\"");

  std::set<std::tuple<std::string, std::string, std::string>> flow_ids;
  for (const auto& f : model.flows) {
    const std::string subject = f.label();
    if (!model.find_element(f.source)) error(subject, "unknown element \"" + f.source + "\"");
    if (!model.find_element(f.target)) error(subject, "unknown element \"" + f.target + "\"");
    if (!flow_ids.emplace(f.name, f.source, f.target).second)
      error(subject, "duplicate flow \"" + f.name + "\"");
    if (!f.carries)
      warning(subject, "flow carries no asset");
    else if (!model.has_asset(*f.carries))
      error(subject, "unknown asset \"" + *f.carries + "\"");
  }

  seen.clear();
  std::set<std::string> protected_assets;
  for (const auto& o : model.objectives) {
    if (!seen.insert(o.name).second) error(o.name, "duplicate objective \"" + o.name + "\"");
    if (!(o.importance > 0.0 && o.importance <= 1.0))
      error(o.name, "invalid importance " + std::to_string(o.importance));
    if (o.protects) {
      if (!model.has_asset(*o.protects))
        error(o.name, "unknown asset \"" + *o.protects + "\"");
      protected_assets.insert(*o.protects);
    }
  }
  for (const auto& a : model.assets)
    if (!protected_assets.contains(a.name))
      warning(a.name, "asset is protected by no objective");
  return out;
}

inline bool has_errors(const std::vector<Diagnostic>& ds) {
  return std::any_of(ds.begin(), ds.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::kError; });
}

}  // namespace stridesea
