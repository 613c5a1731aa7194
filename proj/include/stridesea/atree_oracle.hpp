#pragma once

// Exhaustive reference for attack-tree success probability. Shares only the
// node types with atree.hpp; it never calls evaluate().

#include <cstdint>
#include <vector>

#include "stridesea/atree.hpp"
#include "stridesea/error.hpp"

namespace stridesea::atree {

inline constexpr std::size_t kOracleMaxLeaves = 20;

namespace detail {
inline void gather_leaf_probabilities(const AttackNode& node, std::vector<double>& out) {
  if (node.kind == NodeKind::kLeaf) {
    out.push_back(node.leaf_value);
    return;
  }
  for (const auto& c : node.children) gather_leaf_probabilities(c, out);
}

inline bool holds(const AttackNode& node, std::uint32_t outcome, std::size_t& leaf) {
  if (node.kind == NodeKind::kLeaf) return (outcome >> leaf++) & 1u;
  // Every child is visited so leaf numbering stays aligned with gather order.
  bool all = true;
  bool any = false;
  for (const auto& c : node.children) {
    bool v = holds(c, outcome, leaf);
    all = all && v;
    any = any || v;
  }
  return node.kind == NodeKind::kAnd ? all : any;
}
}  // namespace detail

// Sums the probability of every leaf-outcome vector under which the root
// goal is achieved, treating leaves as independent events.
inline double brute_force_value(const AttackTree& tree) {
  std::vector<double> p;
  detail::gather_leaf_probabilities(tree.root, p);
  if (p.size() > kOracleMaxLeaves)
    throw ValidationError("brute-force oracle refuses trees with more than 20 leaves");
  const std::uint32_t outcomes = 1u << p.size();
  double total = 0.0;
  for (std::uint32_t outcome = 0; outcome < outcomes; ++outcome) {
    std::size_t leaf = 0;
    if (!detail::holds(tree.root, outcome, leaf)) continue;
    double weight = 1.0;
    for (std::size_t i = 0; i < p.size(); ++i) weight *= ((outcome >> i) & 1u) ? p[i] : 1.0 - p[i];
    total += weight;
  }
  return total;
}

}  // namespace stridesea::atree
