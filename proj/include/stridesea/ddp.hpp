#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "stridesea/error.hpp"
#include "stridesea/model.hpp"
#include "stridesea/stride.hpp"

namespace stridesea::ddp {

// Objectives (rows) x risks (columns). Weights are the normalized importances.
struct RiskImpactMatrix {
  std::vector<SecurityObjective> objectives;
  std::vector<double> weights;
  std::vector<Risk> risks;
  std::vector<std::vector<double>> impact;  // [objective][risk]

  bool operator==(const RiskImpactMatrix&) const = default;
};

inline RiskImpactMatrix make_impact_matrix(std::vector<SecurityObjective> objectives,
                                           std::vector<Risk> risks,
                                           std::vector<std::vector<double>> impact) {
  RiskImpactMatrix m;
  m.weights = normalize_weights(std::span<const SecurityObjective>(objectives));
  if (impact.size() != objectives.size())
    throw ValidationError("impact matrix has " + std::to_string(impact.size()) + " rows for " +
                          std::to_string(objectives.size()) + " objectives");
  for (std::size_t o = 0; o < impact.size(); ++o) {
    if (impact[o].size() != risks.size())
      throw ValidationError("impact row \"" + objectives[o].name + "\" is incomplete");
    for (std::size_t r = 0; r < risks.size(); ++r) {
      double v = impact[o][r];
      if (!(v >= 0.0 && v <= 1.0))
        throw ValidationError("impact (" + objectives[o].name + ", " + risks[r].name +
                              ") outside [0,1]");
    }
  }
  for (const auto& r : risks)
    if (!(r.likelihood >= 0.0 && r.likelihood <= 1.0))
      throw ValidationError("likelihood of \"" + r.name + "\" outside [0,1]");
  m.objectives = std::move(objectives);
  m.risks = std::move(risks);
  m.impact = std::move(impact);
  return m;
}

// Crit(r) = L(r) * sum_obj I(r,obj) * W(obj), aligned with m.risks.
inline std::vector<double> risk_criticality(const RiskImpactMatrix& m) {
  std::vector<double> out(m.risks.size(), 0.0);
  for (std::size_t r = 0; r < m.risks.size(); ++r) {
    double weighted = 0.0;
    for (std::size_t o = 0; o < m.objectives.size(); ++o) weighted += m.impact[o][r] * m.weights[o];
    out[r] = m.risks[r].likelihood * weighted;
  }
  return out;
}

// Loss(obj) = W(obj) * sum_r I(r,obj) * L(r), aligned with m.objectives.
inline std::vector<double> loss_of_objectives(const RiskImpactMatrix& m) {
  std::vector<double> out(m.objectives.size(), 0.0);
  for (std::size_t o = 0; o < m.objectives.size(); ++o) {
    double exposure = 0.0;
    for (std::size_t r = 0; r < m.risks.size(); ++r)
      exposure += m.impact[o][r] * m.risks[r].likelihood;
    out[o] = m.weights[o] * exposure;
  }
  return out;
}

struct CategoryRollup {
  std::size_t risk_count = 0;
  double criticality = 0.0;                // sum of Crit over the category's risks
  double loss = 0.0;                       // sum of loss_by_objective
  std::vector<double> loss_by_objective;   // W(obj) * sum_{r in cat} I * L

  bool operator==(const CategoryRollup&) const = default;
};

using Rollup = std::array<CategoryRollup, 6>;  // indexed S,T,R,I,D,E

struct RiskAnalysis {
  std::vector<std::string> objectives;
  std::vector<double> importances;
  std::vector<double> weights;
  std::vector<Risk> risks;
  std::vector<std::vector<double>> impact;  // [objective][risk]
  std::vector<double> criticality;
  std::vector<double> loss;
  Rollup rollup;

  bool operator==(const RiskAnalysis&) const = default;
};

inline RiskAnalysis analyze(const RiskImpactMatrix& m) {
  RiskAnalysis a;
  for (const auto& o : m.objectives) {
    a.objectives.push_back(o.name);
    a.importances.push_back(o.importance);
  }
  a.weights = m.weights;
  a.risks = m.risks;
  a.impact = m.impact;
  a.criticality = risk_criticality(m);
  a.loss = loss_of_objectives(m);
  for (auto& cr : a.rollup) cr.loss_by_objective.assign(m.objectives.size(), 0.0);
  for (std::size_t r = 0; r < m.risks.size(); ++r) {
    auto& cr = a.rollup[index_of(m.risks[r].category)];
    ++cr.risk_count;
    cr.criticality += a.criticality[r];
    for (std::size_t o = 0; o < m.objectives.size(); ++o)
      cr.loss_by_objective[o] += m.weights[o] * m.impact[o][r] * m.risks[r].likelihood;
  }
  for (auto& cr : a.rollup)
    for (double v : cr.loss_by_objective) cr.loss += v;
  return a;
}

struct RollupTable {
  std::vector<std::string> objectives;
  Rollup categories;

  bool operator==(const RollupTable&) const = default;
};

// Merges per-category (or per-asset) analyses over one objective set into the
// series behind the per-category criticality and loss charts.
inline RollupTable stride_rollup(std::span<const RiskAnalysis> analyses) {
  RollupTable t;
  if (analyses.empty()) return t;
  t.objectives = analyses.front().objectives;
  const std::set<std::string> reference(t.objectives.begin(), t.objectives.end());
  for (auto& cr : t.categories) cr.loss_by_objective.assign(t.objectives.size(), 0.0);

  for (const auto& a : analyses) {
    if (std::set<std::string>(a.objectives.begin(), a.objectives.end()) != reference ||
        a.objectives.size() != t.objectives.size())
      throw ValidationError("mismatched objective sets across analyses");
    std::vector<std::size_t> to_reference(a.objectives.size());
    for (std::size_t o = 0; o < a.objectives.size(); ++o)
      to_reference[o] = static_cast<std::size_t>(
          std::find(t.objectives.begin(), t.objectives.end(), a.objectives[o]) -
          t.objectives.begin());
    for (std::size_t c = 0; c < 6; ++c) {
      const auto& src = a.rollup[c];
      auto& dst = t.categories[c];
      dst.risk_count += src.risk_count;
      dst.criticality += src.criticality;
      dst.loss += src.loss;
      for (std::size_t o = 0; o < src.loss_by_objective.size(); ++o)
        dst.loss_by_objective[to_reference[o]] += src.loss_by_objective[o];
    }
  }
  return t;
}

inline double total_criticality(const RollupTable& t) {
  double s = 0.0;
  for (const auto& c : t.categories) s += c.criticality;
  return s;
}

// Countermeasures (rows) x risks (columns).
struct EffectivenessMatrix {
  std::vector<Countermeasure> countermeasures;
  std::vector<std::string> risks;
  std::vector<double> criticality;          // C_r, aligned with risks
  std::vector<std::vector<double>> reduction;  // [countermeasure][risk]

  std::size_t index_of_countermeasure(std::string_view name) const {
    for (std::size_t i = 0; i < countermeasures.size(); ++i)
      if (countermeasures[i].name == name) return i;
    throw UnknownNameError("countermeasure", std::string(name));
  }
  std::vector<std::string> countermeasure_names() const {
    std::vector<std::string> out;
    for (const auto& c : countermeasures) out.push_back(c.name);
    return out;
  }
  bool operator==(const EffectivenessMatrix&) const = default;
};

inline void check_effectiveness(const EffectivenessMatrix& e) {
  if (e.criticality.size() != e.risks.size())
    throw ValidationError("criticality row does not match the risk columns");
  if (e.reduction.size() != e.countermeasures.size())
    throw ValidationError("reduction rows do not match the countermeasures");
  std::set<std::string> seen;
  for (std::size_t c = 0; c < e.countermeasures.size(); ++c) {
    const auto& cm = e.countermeasures[c];
    if (!seen.insert(cm.name).second)
      throw ValidationError("duplicate countermeasure \"" + cm.name + "\"");
    if (!(cm.cost >= 0.0)) throw ValidationError("negative cost for \"" + cm.name + "\"");
    if (e.reduction[c].size() != e.risks.size())
      throw ValidationError("reduction row \"" + cm.name + "\" is incomplete");
    for (double v : e.reduction[c])
      if (!(v >= 0.0 && v <= 1.0))
        throw ValidationError("reduction for \"" + cm.name + "\" outside [0,1]");
  }
}

// Resolves names to row indices, rejecting the first unknown name.
inline std::vector<std::size_t> resolve_selection(const EffectivenessMatrix& e,
                                                  std::span<const std::string> selected) {
  std::vector<std::size_t> rows;
  for (const auto& name : selected) rows.push_back(e.index_of_countermeasure(name));
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

// CRR(r) = 1 - prod_{cm in selection} (1 - R(cm,r)), aligned with e.risks.
inline std::vector<double> combined_risk_reduction(const EffectivenessMatrix& e,
                                                   std::span<const std::size_t> rows) {
  std::vector<double> survive(e.risks.size(), 1.0);
  for (std::size_t row : rows)
    for (std::size_t r = 0; r < e.risks.size(); ++r) survive[r] *= 1.0 - e.reduction[row][r];
  for (double& s : survive) s = 1.0 - s;
  return survive;
}

inline std::vector<double> combined_risk_reduction(const EffectivenessMatrix& e,
                                                   std::span<const std::string> selected) {
  auto rows = resolve_selection(e, selected);
  return combined_risk_reduction(e, std::span<const std::size_t>(rows));
}

// OE(cm) = sum_r R(cm,r) * C_r, aligned with e.countermeasures.
inline std::vector<double> overall_effectiveness(const EffectivenessMatrix& e) {
  std::vector<double> out(e.countermeasures.size(), 0.0);
  for (std::size_t c = 0; c < e.countermeasures.size(); ++c)
    for (std::size_t r = 0; r < e.risks.size(); ++r)
      out[c] += e.reduction[c][r] * e.criticality[r];
  return out;
}

struct PortfolioEvaluation {
  std::vector<std::string> selected;  // sorted by name
  std::vector<double> crr;            // aligned with risks
  std::vector<double> oe;             // aligned with countermeasures
  std::vector<double> residual;       // Crit * (1 - CRR); not a DDP quantity
  double total_cost = 0.0;
  double total_residual = 0.0;

  bool operator==(const PortfolioEvaluation&) const = default;
};

inline PortfolioEvaluation evaluate_portfolio(const EffectivenessMatrix& e,
                                              std::span<const std::size_t> rows) {
  PortfolioEvaluation p;
  for (std::size_t row : rows) {
    p.selected.push_back(e.countermeasures[row].name);
    p.total_cost += e.countermeasures[row].cost;
  }
  std::sort(p.selected.begin(), p.selected.end());
  p.crr = combined_risk_reduction(e, rows);
  p.oe = overall_effectiveness(e);
  p.residual.resize(e.risks.size());
  for (std::size_t r = 0; r < e.risks.size(); ++r) {
    p.residual[r] = e.criticality[r] * (1.0 - p.crr[r]);
    p.total_residual += p.residual[r];
  }
  return p;
}

inline PortfolioEvaluation evaluate_portfolio(const EffectivenessMatrix& e,
                                              std::span<const std::string> selected) {
  auto rows = resolve_selection(e, selected);
  return evaluate_portfolio(e, std::span<const std::size_t>(rows));
}

}  // namespace stridesea::ddp
