#include <gtest/gtest.h>

#include "stridesea/ddp.hpp"
#include "support.hpp"

using namespace stridesea;
using namespace stridesea::testing;

TEST(Ddp, CriticalityMatchesOracle) {
  const auto a = fixture_pipeline().analysis;
  const auto crit = oracle::criticality();
  ASSERT_EQ(a.criticality.size(), 7u);
  for (std::size_t r = 0; r < 7; ++r) EXPECT_TRUE(near(a.criticality[r], crit[r])) << a.risks[r].name;
}

TEST(Ddp, CriticalityDisplayValues) {
  const auto a = fixture_pipeline().analysis;
  const std::vector<std::string> shown = {"0.23", "0.07", "0.03", "0.03", "0.01", "0.04", "0.11"};
  for (std::size_t r = 0; r < 7; ++r) EXPECT_EQ(format_display(a.criticality[r]), shown[r]) << r;
}

// The printed matrix gives 0.11 for transmission and 0.03 for memory overlap;
// recomputation from the impact cells yields the two swapped.
TEST(Ddp, TransmissionAndOverlapCriticalitiesAreSwappedInPrint) {
  const auto a = fixture_pipeline().analysis;
  EXPECT_EQ(format_display(a.criticality[2]), "0.03");
  EXPECT_EQ(format_display(a.criticality[6]), "0.11");
  const auto ref = oracle::reference_criticality();
  EXPECT_EQ(format_display(ref[2]), "0.11");
  EXPECT_EQ(format_display(ref[6]), "0.03");
}

TEST(Ddp, LossMatchesOracle) {
  const auto a = fixture_pipeline().analysis;
  const auto loss = oracle::loss();
  const std::vector<std::string> shown = {"0.21", "0.14", "0.11", "0.05", "0.00"};
  ASSERT_EQ(a.loss.size(), 5u);
  for (std::size_t o = 0; o < 5; ++o) {
    EXPECT_TRUE(near(a.loss[o], loss[o])) << o;
    EXPECT_EQ(format_display(a.loss[o]), shown[o]) << o;
  }
}

TEST(Ddp, CriticalityAndLossTotalsAgree) {
  const auto a = fixture_pipeline().analysis;
  double crit = 0, loss = 0;
  for (double c : a.criticality) crit += c;
  for (double l : a.loss) loss += l;
  EXPECT_TRUE(near(crit, loss));
}

TEST(Ddp, RollupByCategory) {
  const auto a = fixture_pipeline().analysis;
  const auto& t = a.rollup[index_of(StrideCategory::kTampering)];
  EXPECT_EQ(t.risk_count, 7u);
  double crit = 0;
  for (double c : oracle::criticality()) crit += c;
  EXPECT_TRUE(near(t.criticality, crit));
  EXPECT_TRUE(near(t.loss, crit));
  for (std::size_t o = 0; o < 5; ++o) EXPECT_TRUE(near(t.loss_by_objective[o], a.loss[o]));
  for (auto c : kAllCategories) {
    if (c == StrideCategory::kTampering) continue;
    EXPECT_EQ(a.rollup[index_of(c)].risk_count, 0u);
    EXPECT_EQ(a.rollup[index_of(c)].loss, 0.0);
  }
}

TEST(Ddp, StrideRollupMergesAnalyses) {
  const auto a = fixture_pipeline().analysis;
  const std::vector<ddp::RiskAnalysis> both = {a, a};
  const auto t = ddp::stride_rollup(both);
  EXPECT_EQ(t.categories[index_of(StrideCategory::kTampering)].risk_count, 14u);
  double crit = 0;
  for (double c : a.criticality) crit += c;
  EXPECT_TRUE(near(ddp::total_criticality(t), 2 * crit));

  auto other = a;
  other.objectives[0] = "something else";
  const std::vector<ddp::RiskAnalysis> mixed = {a, other};
  EXPECT_THROW(ddp::stride_rollup(mixed), ValidationError);
}

TEST(Ddp, ImpactMatrixValidation) {
  const std::vector<SecurityObjective> objs = {{"o", 1.0, std::nullopt}};
  const std::vector<Risk> risks = {{"r", 0.5, StrideCategory::kTampering, "a"}};
  EXPECT_THROW(ddp::make_impact_matrix(objs, risks, {{1.5}}), ValidationError);
  EXPECT_THROW(ddp::make_impact_matrix(objs, risks, {{}}), ValidationError);
  EXPECT_THROW(ddp::make_impact_matrix(objs, risks, {}), ValidationError);
  auto bad = risks;
  bad[0].likelihood = 2.0;
  EXPECT_THROW(ddp::make_impact_matrix(objs, bad, {{1.0}}), ValidationError);
  const auto m = ddp::make_impact_matrix(objs, risks, {{1.0}});
  EXPECT_EQ(ddp::risk_criticality(m), (std::vector<double>{0.5}));
}

TEST(Ddp, CombinedRiskReduction) {
  const auto e = fixture_effect();
  const std::vector<std::string> all = e.countermeasure_names();
  const auto crr = ddp::combined_risk_reduction(e, std::span<const std::string>(all));
  const auto expected = oracle::crr({true, true, true, true});
  for (std::size_t r = 0; r < 7; ++r) EXPECT_TRUE(near(crr[r], expected[r])) << r;
  EXPECT_EQ(format_display(crr[1]), "0.95");
  EXPECT_EQ(format_display(crr[0]), "0.80");

  const std::vector<std::string> no_fim = {kCrypto, kAccess, kValidation};
  const auto partial = ddp::combined_risk_reduction(e, std::span<const std::string>(no_fim));
  EXPECT_EQ(format_display(partial[1]), "0.90");
  EXPECT_EQ(format_display(partial[4]), "0.90");

  const std::vector<std::string> none;
  for (double v : ddp::combined_risk_reduction(e, std::span<const std::string>(none))) EXPECT_EQ(v, 0.0);
}

TEST(Ddp, OverallEffectivenessAgainstOracle) {
  const auto e = fixture_effect();
  const auto oe = ddp::overall_effectiveness(e);
  const auto ref = oracle::reference_criticality();
  for (int c = 0; c < 4; ++c) EXPECT_TRUE(near(oe[c], oracle::oe(c, ref))) << c;
  EXPECT_EQ(format_display(oe[0]), "0.21");
  EXPECT_EQ(format_display(oe[1]), "0.07");
  EXPECT_EQ(format_display(oe[2]), "0.19");
  EXPECT_EQ(format_display(oe[3]), "0.04");
}

TEST(Ddp, WhatIfDropsFim) {
  const auto e = fixture_effect();
  const std::vector<std::string> all = e.countermeasure_names();
  const std::vector<std::string> no_fim = {kValidation, kCrypto, kAccess};
  const auto with = ddp::evaluate_portfolio(e, std::span<const std::string>(all));
  const auto without = ddp::evaluate_portfolio(e, std::span<const std::string>(no_fim));
  EXPECT_EQ(with.total_cost, 4.0);
  EXPECT_EQ(without.total_cost, 3.0);
  EXPECT_EQ(without.selected, (std::vector<std::string>{kAccess, kCrypto, kValidation}));
  for (std::size_t r = 0; r < 7; ++r) {
    EXPECT_LE(without.crr[r], with.crr[r]);
    EXPECT_TRUE(near(without.residual[r], e.criticality[r] * (1.0 - without.crr[r])));
  }
  EXPECT_GT(without.total_residual, with.total_residual);
}

TEST(Ddp, UnknownCountermeasureIsNamed) {
  const auto e = fixture_effect();
  const std::vector<std::string> sel = {"Use magic"};
  try {
    ddp::evaluate_portfolio(e, std::span<const std::string>(sel));
    FAIL();
  } catch (const UnknownNameError& err) {
    EXPECT_EQ(err.name(), "Use magic");
    EXPECT_STREQ(err.what(), "unknown countermeasure \"Use magic\"");
  }
}

TEST(Ddp, EffectivenessChecks) {
  auto e = fixture_effect();
  e.countermeasures[0].cost = -1;
  EXPECT_THROW(ddp::check_effectiveness(e), ValidationError);
  e = fixture_effect();
  e.reduction[1][0] = 1.2;
  EXPECT_THROW(ddp::check_effectiveness(e), ValidationError);
  e = fixture_effect();
  e.criticality.pop_back();
  EXPECT_THROW(ddp::check_effectiveness(e), ValidationError);
}
