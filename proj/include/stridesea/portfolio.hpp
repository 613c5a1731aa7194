#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "stridesea/ddp.hpp"
#include "stridesea/error.hpp"

namespace stridesea::ddp {

inline constexpr std::size_t kMaxPortfolioCandidates = 24;

// A risk counts as covered when CRR >= threshold - kCoverageTolerance; this
// absorbs the rounding in 1 - (1 - 0.8) and similar products.
inline constexpr double kCoverageTolerance = 1e-12;

// Costs and OE sums closer than this are treated as ties.
inline constexpr double kTieTolerance = 1e-9;

inline bool covers(double crr, double threshold) { return crr >= threshold - kCoverageTolerance; }

// Risks the optimizer must cover: Crit(r) >= cutoff.
inline std::vector<std::size_t> constrained_risks(const EffectivenessMatrix& e, double cutoff) {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < e.risks.size(); ++r)
    if (e.criticality[r] >= cutoff) out.push_back(r);
  return out;
}

// Constrained risks left below the threshold by `crr`, in column order.
inline std::vector<std::string> uncovered_risks(const EffectivenessMatrix& e,
                                                const std::vector<double>& crr, double threshold,
                                                double cutoff) {
  std::vector<std::string> out;
  for (std::size_t r : constrained_risks(e, cutoff))
    if (!covers(crr[r], threshold)) out.push_back(e.risks[r]);
  return out;
}

// Ordering on candidate portfolios: lower cost, then higher total OE, then
// the lexicographically smaller sorted name list.
struct PortfolioRank {
  double cost = std::numeric_limits<double>::infinity();
  double oe = 0.0;
  std::vector<std::string> names;

  bool better_than(const PortfolioRank& other) const {
    if (cost < other.cost - kTieTolerance) return true;
    if (cost > other.cost + kTieTolerance) return false;
    if (oe > other.oe + kTieTolerance) return true;
    if (oe < other.oe - kTieTolerance) return false;
    return names < other.names;
  }
};

namespace detail {

class PortfolioSearch {
 public:
  PortfolioSearch(const EffectivenessMatrix& e, double threshold, std::vector<std::size_t> risks)
      : e_(e), threshold_(threshold), risks_(std::move(risks)) {
    // Branch in name order so the first-found tie is already the lexicographic one.
    order_.resize(e.countermeasures.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return e.countermeasures[a].name < e.countermeasures[b].name;
    });
    oe_ = overall_effectiveness(e);

    const std::size_t n = order_.size();
    suffix_survive_.assign(n + 1, std::vector<double>(risks_.size(), 1.0));
    suffix_min_cost_.assign(n + 1, std::vector<double>(risks_.size(),
                                                       std::numeric_limits<double>::infinity()));
    for (std::size_t i = n; i-- > 0;) {
      const std::size_t row = order_[i];
      for (std::size_t k = 0; k < risks_.size(); ++k) {
        const double red = e.reduction[row][risks_[k]];
        suffix_survive_[i][k] = suffix_survive_[i + 1][k] * (1.0 - red);
        suffix_min_cost_[i][k] = suffix_min_cost_[i + 1][k];
        if (red > 0.0)
          suffix_min_cost_[i][k] = std::min(suffix_min_cost_[i][k], e.countermeasures[row].cost);
      }
    }
  }

  std::vector<std::size_t> run(std::vector<std::size_t> incumbent) {
    best_rows_ = std::move(incumbent);
    best_ = rank(best_rows_);
    std::vector<double> survive(risks_.size(), 1.0);
    chosen_.clear();
    descend(0, survive, 0.0);
    std::sort(best_rows_.begin(), best_rows_.end());
    return best_rows_;
  }

 private:
  PortfolioRank rank(const std::vector<std::size_t>& rows) const {
    PortfolioRank r;
    r.cost = 0.0;
    for (std::size_t row : rows) {
      r.cost += e_.countermeasures[row].cost;
      r.oe += oe_[row];
      r.names.push_back(e_.countermeasures[row].name);
    }
    std::sort(r.names.begin(), r.names.end());
    return r;
  }

  void descend(std::size_t depth, const std::vector<double>& survive, double cost) {
    if (cost > best_.cost + kTieTolerance) return;
    double bound = cost;
    for (std::size_t k = 0; k < risks_.size(); ++k) {
      if (covers(1.0 - survive[k], threshold_)) continue;
      if (!covers(1.0 - survive[k] * suffix_survive_[depth][k], threshold_)) return;
      bound = std::max(bound, cost + suffix_min_cost_[depth][k]);
    }
    if (bound > best_.cost + kTieTolerance) return;

    if (depth == order_.size()) {
      auto candidate = rank(chosen_);
      if (candidate.better_than(best_)) {
        best_ = std::move(candidate);
        best_rows_ = chosen_;
      }
      return;
    }

    const std::size_t row = order_[depth];
    std::vector<double> with(survive);
    for (std::size_t k = 0; k < risks_.size(); ++k) with[k] *= 1.0 - e_.reduction[row][risks_[k]];
    chosen_.push_back(row);
    descend(depth + 1, with, cost + e_.countermeasures[row].cost);
    chosen_.pop_back();
    descend(depth + 1, survive, cost);
  }

  const EffectivenessMatrix& e_;
  double threshold_;
  std::vector<std::size_t> risks_;
  std::vector<std::size_t> order_;
  std::vector<double> oe_;
  std::vector<std::vector<double>> suffix_survive_;
  std::vector<std::vector<double>> suffix_min_cost_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> best_rows_;
  PortfolioRank best_;
};

}  // namespace detail

// Minimum-cost subset of countermeasures with CRR(r) >= threshold for every
// risk whose criticality is at least `cutoff`. Exact branch-and-bound.
inline PortfolioEvaluation optimize_portfolio(const EffectivenessMatrix& e, double threshold,
                                              double cutoff) {
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw ValidationError("threshold must lie in [0,1]");
  if (!(cutoff >= 0.0)) throw ValidationError("cutoff must be non-negative");
  if (e.countermeasures.size() > kMaxPortfolioCandidates)
    throw ValidationError("portfolio search supports at most 24 countermeasures, got " +
                          std::to_string(e.countermeasures.size()));

  auto risks = constrained_risks(e, cutoff);
  std::vector<std::size_t> all(e.countermeasures.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const auto full = combined_risk_reduction(e, std::span<const std::size_t>(all));
  std::vector<std::string> uncoverable;
  for (std::size_t r : risks)
    if (!covers(full[r], threshold)) uncoverable.push_back(e.risks[r]);
  if (!uncoverable.empty()) throw InfeasibleError(std::move(uncoverable));

  auto best = detail::PortfolioSearch(e, threshold, std::move(risks)).run(all);
  return evaluate_portfolio(e, std::span<const std::size_t>(best));
}

}  // namespace stridesea::ddp
