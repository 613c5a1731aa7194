#include <gtest/gtest.h>

#include "stridesea/portfolio.hpp"
#include "support.hpp"

using namespace stridesea;
using namespace stridesea::testing;

namespace {
ddp::EffectivenessMatrix matrix(std::vector<std::pair<std::string, double>> cms,
                                std::vector<std::vector<double>> reduction, std::vector<double> crit) {
  ddp::EffectivenessMatrix e;
  for (auto& [n, c] : cms) e.countermeasures.push_back({n, c});
  for (std::size_t r = 0; r < crit.size(); ++r) e.risks.push_back("r" + std::to_string(r + 1));
  e.criticality = std::move(crit);
  e.reduction = std::move(reduction);
  return e;
}
}  // namespace

TEST(Optimizer, FixtureAtDefaultThreshold) {
  const auto p = ddp::optimize_portfolio(fixture_effect(), 0.8, 0.0);
  EXPECT_EQ(p.selected, (std::vector<std::string>{kAccess, kCrypto, kValidation}));
  EXPECT_EQ(p.total_cost, 3.0);
  for (double c : p.crr) EXPECT_TRUE(ddp::covers(c, 0.8));
}

TEST(Optimizer, FixtureIsInfeasibleAtNinety) {
  try {
    ddp::optimize_portfolio(fixture_effect(), 0.9, 0.0);
    FAIL();
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.uncoverable(), (std::vector<std::string>{kSql, kTransmission, kJson, kCollision, kOverlap}));
  }
}

TEST(Optimizer, CutoffRelaxesConstraints) {
  // Only SQL injection is at least 0.2 critical (by the reference row).
  const auto p = ddp::optimize_portfolio(fixture_effect(), 0.8, 0.2);
  EXPECT_EQ(p.selected, (std::vector<std::string>{kValidation}));
  EXPECT_THROW(ddp::optimize_portfolio(fixture_effect(), 0.9, 0.2), InfeasibleError);
}

TEST(Optimizer, ZeroThresholdSelectsNothing) {
  const auto p = ddp::optimize_portfolio(fixture_effect(), 0.0, 0.0);
  EXPECT_TRUE(p.selected.empty());
  EXPECT_EQ(p.total_cost, 0.0);
}

TEST(Optimizer, CoverageToleranceAbsorbsRounding) {
  // 1 - (1 - 0.8) is 0.8 only up to rounding.
  const auto e = matrix({{"a", 1}}, {{0.8}}, {0.5});
  EXPECT_EQ(ddp::optimize_portfolio(e, 0.8, 0.0).selected, (std::vector<std::string>{"a"}));
}

TEST(Optimizer, TieBreaksByOeThenNames) {
  // Equal cost, b also reduces the unconstrained r2.
  auto e = matrix({{"a", 1}, {"b", 1}}, {{0.9, 0.0}, {0.9, 0.5}}, {0.5, 0.05});
  EXPECT_EQ(ddp::optimize_portfolio(e, 0.8, 0.1).selected, (std::vector<std::string>{"b"}));
  // Full tie: lexicographically smaller name list.
  e = matrix({{"z", 1}, {"m", 1}}, {{0.9}, {0.9}}, {0.5});
  EXPECT_EQ(ddp::optimize_portfolio(e, 0.8, 0.0).selected, (std::vector<std::string>{"m"}));
}

TEST(Optimizer, CheaperPairBeatsExpensiveSingle) {
  const auto e = matrix({{"big", 5}, {"x", 1}, {"y", 1}}, {{0.9, 0.9}, {0.9, 0}, {0, 0.9}}, {0.5, 0.5});
  const auto p = ddp::optimize_portfolio(e, 0.8, 0.0);
  EXPECT_EQ(p.selected, (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(p.total_cost, 2.0);
}

TEST(Optimizer, CombinationReachesThreshold) {
  // Two 0.6 reductions combine to 0.84.
  const auto e = matrix({{"a", 1}, {"b", 1}, {"c", 3}}, {{0.6}, {0.6}, {0.85}}, {0.5});
  EXPECT_EQ(ddp::optimize_portfolio(e, 0.8, 0.0).selected, (std::vector<std::string>{"a", "b"}));
}

TEST(Optimizer, ZeroCostCountermeasuresPreferHigherOe) {
  const auto e = matrix({{"free", 0}, {"paid", 1}}, {{0.2}, {0.9}}, {0.5});
  EXPECT_EQ(ddp::optimize_portfolio(e, 0.8, 0.0).selected, (std::vector<std::string>{"free", "paid"}));
}

TEST(Optimizer, RejectsInvalidArguments) {
  const auto e = fixture_effect();
  EXPECT_THROW(ddp::optimize_portfolio(e, 1.5, 0.0), ValidationError);
  EXPECT_THROW(ddp::optimize_portfolio(e, -0.1, 0.0), ValidationError);
  EXPECT_THROW(ddp::optimize_portfolio(e, 0.8, -1.0), ValidationError);
}

TEST(Optimizer, CandidateLimit) {
  std::vector<std::pair<std::string, double>> cms;
  std::vector<std::vector<double>> red;
  for (int i = 0; i < 25; ++i) {
    cms.push_back({"cm" + std::to_string(i), 1});
    red.push_back({0.1});
  }
  auto e = matrix(cms, red, {0.5});
  EXPECT_THROW(ddp::optimize_portfolio(e, 0.5, 0.0), ValidationError);
  e.countermeasures.pop_back();
  e.reduction.pop_back();
  const auto p = ddp::optimize_portfolio(e, 0.5, 0.0);
  // 0.9^6 > 0.5 >= 0.9^7
  EXPECT_EQ(p.selected.size(), 7u);
}

TEST(Optimizer, UncoveredRisks) {
  const auto e = fixture_effect();
  const std::vector<std::string> only = {kValidation};
  const auto crr = ddp::combined_risk_reduction(e, std::span<const std::string>(only));
  EXPECT_EQ(ddp::uncovered_risks(e, crr, 0.8, 0.0).size(), 6u);
  EXPECT_TRUE(ddp::uncovered_risks(e, crr, 0.8, 0.2).empty());
}
