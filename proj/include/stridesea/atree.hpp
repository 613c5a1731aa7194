#pragma once

#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "stridesea/error.hpp"
#include "stridesea/model.hpp"
#include "stridesea/stride.hpp"

namespace stridesea::atree {

// Named attack likelihood levels and their node values.
namespace level {
inline constexpr double kLow = 0.1;
inline constexpr double kModerate = 0.5;
inline constexpr double kHigh = 0.9;
}  // namespace level

inline std::optional<double> level_value(std::string_view name) {
  if (name == "low") return level::kLow;
  if (name == "moderate") return level::kModerate;
  if (name == "high") return level::kHigh;
  return std::nullopt;
}

inline std::optional<std::string_view> level_name(double v) {
  if (v == level::kLow) return "low";
  if (v == level::kModerate) return "moderate";
  if (v == level::kHigh) return "high";
  return std::nullopt;
}

enum class NodeKind { kLeaf, kAnd, kOr };

constexpr std::string_view kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::kLeaf: return "leaf";
    case NodeKind::kAnd: return "and";
    case NodeKind::kOr: return "or";
  }
  return "";
}

struct AttackNode {
  std::string name;
  NodeKind kind = NodeKind::kLeaf;
  std::optional<StrideCategory> category;
  bool is_risk = false;
  double leaf_value = 0.0;  // leaves only
  std::vector<AttackNode> children;  // gates only

  bool is_gate() const { return kind != NodeKind::kLeaf; }
  bool operator==(const AttackNode&) const = default;

  static AttackNode leaf(std::string name, double value) {
    AttackNode n;
    n.name = std::move(name);
    n.kind = NodeKind::kLeaf;
    n.leaf_value = value;
    return n;
  }
  static AttackNode gate(NodeKind kind, std::string name, std::vector<AttackNode> children) {
    AttackNode n;
    n.name = std::move(name);
    n.kind = kind;
    n.children = std::move(children);
    return n;
  }
  AttackNode& tag(StrideCategory c) {
    category = c;
    return *this;
  }
  AttackNode& mark_risk() {
    is_risk = true;
    return *this;
  }
};

struct AttackTree {
  std::string goal;
  std::string asset;
  AttackNode root;
  bool operator==(const AttackTree&) const = default;
};

using AttackForest = std::vector<AttackTree>;

// Checks the structural invariants; returns a description of the first
// violation, or nullopt.
inline std::optional<std::string> find_structural_error(const AttackNode& node) {
  if (node.kind == NodeKind::kLeaf) {
    if (!node.children.empty()) return "leaf \"" + node.name + "\" has children";
    if (!(node.leaf_value >= 0.0 && node.leaf_value <= 1.0))
      return "leaf \"" + node.name + "\" value outside [0,1]";
    return std::nullopt;
  }
  if (node.children.empty()) return "empty gate \"" + node.name + "\"";
  for (const auto& c : node.children)
    if (auto e = find_structural_error(c)) return e;
  return std::nullopt;
}

inline std::size_t count_leaves(const AttackNode& node) {
  if (node.kind == NodeKind::kLeaf) return 1;
  std::size_t n = 0;
  for (const auto& c : node.children) n += count_leaves(c);
  return n;
}

inline std::size_t count_nodes(const AttackNode& node) {
  std::size_t n = 1;
  for (const auto& c : node.children) n += count_nodes(c);
  return n;
}

// Node values in pre-order (root first). Gates hold the AND product or the
// OR complement-product of their children.
struct EvaluatedTree {
  AttackTree tree;
  std::vector<double> values;

  double root_value() const { return values.front(); }

  // Pre-order walk: fn(node, value, depth).
  void visit(const std::function<void(const AttackNode&, double, int)>& fn) const {
    std::size_t index = 0;
    walk(tree.root, 0, index, fn);
  }

 private:
  void walk(const AttackNode& node, int depth, std::size_t& index,
            const std::function<void(const AttackNode&, double, int)>& fn) const {
    fn(node, values[index++], depth);
    for (const auto& c : node.children) walk(c, depth + 1, index, fn);
  }
};

namespace detail {
inline double evaluate_into(const AttackNode& node, std::vector<double>& values) {
  const std::size_t slot = values.size();
  values.push_back(0.0);
  double v = 0.0;
  switch (node.kind) {
    case NodeKind::kLeaf:
      v = node.leaf_value;
      break;
    case NodeKind::kAnd:
      v = 1.0;
      for (const auto& c : node.children) v *= evaluate_into(c, values);
      break;
    case NodeKind::kOr: {
      double fail = 1.0;
      for (const auto& c : node.children) fail *= 1.0 - evaluate_into(c, values);
      v = 1.0 - fail;
      break;
    }
  }
  values[slot] = v;
  return v;
}
}  // namespace detail

inline EvaluatedTree evaluate(const AttackTree& tree) {
  EvaluatedTree out;
  out.tree = tree;
  out.values.reserve(count_nodes(tree.root));
  detail::evaluate_into(tree.root, out.values);
  return out;
}

inline std::vector<EvaluatedTree> evaluate(std::span<const AttackTree> forest) {
  std::vector<EvaluatedTree> out;
  out.reserve(forest.size());
  for (const auto& t : forest) out.push_back(evaluate(t));
  return out;
}

// Value of the node tagged with `category` in the trees rooted at `asset`;
// nullopt when no such node exists.
inline std::optional<double> category_exploitability(std::span<const EvaluatedTree> forest,
                                                     std::string_view asset,
                                                     StrideCategory category) {
  std::optional<double> found;
  std::size_t matches = 0;
  for (const auto& et : forest) {
    if (et.tree.asset != asset) continue;
    et.visit([&](const AttackNode& node, double value, int) {
      if (node.category == category) {
        ++matches;
        found = value;
      }
    });
  }
  if (matches > 1)
    throw ValidationError("ambiguous category subgoal: " + std::to_string(matches) + " nodes tagged " +
                          std::string(1, letter(category)) + " for asset \"" + std::string(asset) +
                          "\"");
  return found;
}

namespace detail {
// `inherited` is the S..E index of the nearest tagged ancestor, or -1.
inline void collect_risks(const AttackNode& node, int inherited, const EvaluatedTree& et,
                          std::size_t& index, std::vector<Risk>& out) {
  const double value = et.values[index++];
  const int category = node.category ? static_cast<int>(index_of(*node.category)) : inherited;
  if (node.is_risk) {
    if (category < 0) throw ValidationError("uncategorized risk \"" + node.name + "\"");
    out.push_back({node.name, value, kAllCategories[static_cast<std::size_t>(category)], et.tree.asset});
  }
  for (const auto& c : node.children) collect_risks(c, category, et, index, out);
}
}  // namespace detail

// One risk per risk-tagged node, in document order.
inline std::vector<Risk> extract_risks(std::span<const EvaluatedTree> forest) {
  std::vector<Risk> out;
  for (const auto& et : forest) {
    std::size_t index = 0;
    detail::collect_risks(et.tree.root, -1, et, index, out);
  }
  std::set<std::string> names;
  for (const auto& r : out)
    if (!names.insert(r.name).second) throw ValidationError("duplicate risk name \"" + r.name + "\"");
  return out;
}

}  // namespace stridesea::atree
