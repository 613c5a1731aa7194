#include <gtest/gtest.h>

#include "stridesea/atree.hpp"
#include "stridesea/atree_oracle.hpp"
#include "support.hpp"

using namespace stridesea;
using namespace stridesea::testing;
using atree::AttackNode;
using atree::NodeKind;

TEST(AttackTree, GateArithmetic) {
  atree::AttackTree t{"g", "a",
                      AttackNode::gate(NodeKind::kAnd, "and",
                                       {AttackNode::leaf("x", 0.9), AttackNode::leaf("y", 0.5)})};
  EXPECT_DOUBLE_EQ(atree::evaluate(t).root_value(), 0.45);
  t.root.kind = NodeKind::kOr;
  EXPECT_DOUBLE_EQ(atree::evaluate(t).root_value(), 1.0 - 0.1 * 0.5);
}

TEST(AttackTree, FixtureNodeValues) {
  const auto p = fixture_pipeline();
  ASSERT_EQ(p.evaluated.size(), 2u);
  const auto l = oracle::likelihood();
  // Root OR over SQL, PHI, transmission, JSON, credentials.
  double keep = 1.0;
  for (int r = 0; r < 5; ++r) keep *= 1.0 - l[r];
  EXPECT_TRUE(near(p.evaluated[0].root_value(), 1.0 - keep));
  EXPECT_EQ(format_display(p.evaluated[0].root_value()), "0.89");
  EXPECT_TRUE(near(p.evaluated[0].root_value(), 0.8878069, 1e-9));
  EXPECT_TRUE(near(p.evaluated[1].root_value(), 0.75));
  EXPECT_TRUE(near(atree::brute_force_value(p.evaluated[0].tree), p.evaluated[0].root_value()));
}

TEST(AttackTree, VisitIsPreorderWithDepth) {
  const auto p = fixture_pipeline();
  std::vector<std::pair<std::string, int>> seen;
  p.evaluated[0].visit([&](const AttackNode& n, double, int depth) { seen.emplace_back(n.name, depth); });
  ASSERT_EQ(seen.size(), 10u);
  EXPECT_EQ(seen[0].second, 0);
  EXPECT_EQ(seen[1].first, kSql);
  EXPECT_EQ(seen[2].second, 2);
  EXPECT_EQ(seen[4].first, kPhi);
}

TEST(AttackTree, ExtractRisksInheritsCategory) {
  const auto p = fixture_pipeline();
  const auto risks = atree::extract_risks(p.evaluated);
  const std::vector<std::string> names = {kSql, kPhi, kTransmission, kJson, kCredentials, kCollision, kOverlap};
  ASSERT_EQ(risks.size(), names.size());
  const auto l = oracle::likelihood();
  for (std::size_t i = 0; i < risks.size(); ++i) {
    EXPECT_EQ(risks[i].name, names[i]);
    EXPECT_EQ(risks[i].category, StrideCategory::kTampering);
    EXPECT_TRUE(near(risks[i].likelihood, l[i])) << names[i];
  }
  EXPECT_EQ(risks[0].asset, "Immunization Records");
  EXPECT_EQ(risks[6].asset, "User Information");
}

TEST(AttackTree, UncategorizedRiskIsRejected) {
  atree::AttackTree t{"g", "a", AttackNode::leaf("x", 0.1).mark_risk()};
  const std::vector<atree::EvaluatedTree> forest = {atree::evaluate(t)};
  EXPECT_THROW(atree::extract_risks(forest), ValidationError);
}

TEST(AttackTree, NestedCategoryOverridesInherited) {
  auto inner = AttackNode::leaf("spoof", 0.5).tag(StrideCategory::kSpoofing).mark_risk();
  auto root = AttackNode::gate(NodeKind::kOr, "r", {inner, AttackNode::leaf("t", 0.1).mark_risk()})
                  .tag(StrideCategory::kTampering);
  const std::vector<atree::EvaluatedTree> forest = {atree::evaluate({"g", "a", root})};
  const auto risks = atree::extract_risks(forest);
  EXPECT_EQ(risks[0].category, StrideCategory::kSpoofing);
  EXPECT_EQ(risks[1].category, StrideCategory::kTampering);
}

TEST(AttackTree, CategoryExploitability) {
  const auto p = fixture_pipeline();
  auto v = atree::category_exploitability(p.evaluated, "Immunization Records", StrideCategory::kTampering);
  ASSERT_TRUE(v);
  EXPECT_DOUBLE_EQ(*v, p.evaluated[0].root_value());
  EXPECT_FALSE(atree::category_exploitability(p.evaluated, "Immunization Records", StrideCategory::kSpoofing));
  EXPECT_FALSE(atree::category_exploitability(p.evaluated, "nowhere", StrideCategory::kTampering));
}

TEST(AttackTree, AmbiguousCategoryIsRejected) {
  auto root = AttackNode::gate(NodeKind::kOr, "r",
                               {AttackNode::leaf("a", 0.1).tag(StrideCategory::kDenialOfService),
                                AttackNode::leaf("b", 0.2).tag(StrideCategory::kDenialOfService)});
  const std::vector<atree::EvaluatedTree> forest = {atree::evaluate({"g", "x", root})};
  EXPECT_THROW(atree::category_exploitability(forest, "x", StrideCategory::kDenialOfService), ValidationError);
}

TEST(AttackTree, StructuralErrors) {
  EXPECT_FALSE(atree::find_structural_error(AttackNode::leaf("x", 0.3)));
  EXPECT_TRUE(atree::find_structural_error(AttackNode::leaf("x", 1.3)));
  EXPECT_TRUE(atree::find_structural_error(AttackNode::gate(NodeKind::kAnd, "g", {})));
}

TEST(AttackTree, CountsNodesAndLeaves) {
  const auto p = fixture_pipeline();
  EXPECT_EQ(atree::count_nodes(p.forest[0].root), 10u);
  EXPECT_EQ(atree::count_leaves(p.forest[0].root), 7u);
}
