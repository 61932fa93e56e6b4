#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "ivr/construction.hpp"
#include "ivr/opponents.hpp"
#include "ivr/verify.hpp"

namespace ivr {
namespace {

TEST(SublemmaOracle, Examples) {
  EXPECT_TRUE(sublemma_oracle(1, 3, 2));
  EXPECT_FALSE(sublemma_oracle(2, 4, 2));  // 2*2 == 4: the tie boundary
  EXPECT_FALSE(sublemma_oracle(5, 3, 1));
}

TEST(SublemmaOracle, RejectsOutOfRange) {
  EXPECT_THROW(sublemma_oracle(0, 3, 1), std::invalid_argument);
  EXPECT_THROW(sublemma_oracle(1, 3, 0), std::invalid_argument);
  EXPECT_THROW(sublemma_oracle(1, 3, 4), std::invalid_argument);
}

TEST(SublemmaOracle, MatchesTheFactoredInequality) {
  // (G-1)(phi+n) < (G+1)(phi-n), in plain signed integers
  for (long g = 1; g <= 60; ++g)
    for (long phi = 1; phi <= 60; ++phi)
      for (long n = 1; n <= phi; ++n)
        ASSERT_EQ(sublemma_oracle(g, phi, n), (g - 1) * (phi + n) < (g + 1) * (phi - n)) << g << ' ' << phi << ' ' << n;
}

TEST(SublemmaSweep, SingleCase) {
  // 2/2 vs 0/0 = infinity: complement side; 1*1 < 1 is false: complement side
  SublemmaSweepReport r = check_sublemma_equivalence(1, 1, 1);
  EXPECT_EQ(r.cases, 1u);
  EXPECT_TRUE(r.ok());
}

TEST(SublemmaSweep, FullGrid) {
  SublemmaSweepReport r = check_sublemma_equivalence(60, 60, 30);
  // sum over phi of min(phi, 30), times 60 values of G
  std::size_t expected = 0;
  for (std::size_t phi = 1; phi <= 60; ++phi) expected += 60 * std::min<std::size_t>(phi, 30);
  EXPECT_EQ(r.cases, expected);
  EXPECT_TRUE(r.ok());
}

TEST(SublemmaSweep, FlippedTieIsCaughtOnTheBoundary) {
  auto flipped = [](const Capital& g, const Capital& a, const Capital& na) {
    return ext_ratio_cmp(ExtRatio(g + 1, a), ExtRatio(g - 1, na)) >= 0;
  };
  SublemmaSweepReport r = check_sublemma_equivalence(20, 20, 20, flipped);
  ASSERT_FALSE(r.ok());
  for (const auto& c : r.counterexamples) EXPECT_EQ(c.n * c.gambler, c.phi);
}

TEST(SublemmaSweep, RejectsZeroBounds) { EXPECT_THROW(check_sublemma_equivalence(0, 1, 1), std::invalid_argument); }

Trace default_trace(std::size_t stages, std::vector<OpponentStrategy>* fam_out = nullptr) {
  OracleSequence a = seeded_oracle(42);
  auto fam = make_family(default_family_specs(), a);
  if (fam_out) *fam_out = fam;
  return build_b(a, fam, stages).trace;
}

TEST(Conservation, EmptyTrace) {
  Trace t = build_b(seeded_oracle(1), {}, 0).trace;
  EXPECT_TRUE(check_conservation(t));
}

TEST(Conservation, HoldsOnConstructedTraces) { EXPECT_TRUE(check_conservation(default_trace(500))); }

TEST(Conservation, CorruptedGamblerIsCaught) {
  Trace t = default_trace(200);
  t.rows[120].gambler_values.opponents[2] += 1;
  CheckResult r = check_conservation(t);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.detail.find("stage 121"), std::string::npos) << r.detail;
}

TEST(Conservation, WrongMatchFlagIsCaught) {
  Trace t = default_trace(50);
  t.rows[10].matches_A = !t.rows[10].matches_A;
  EXPECT_FALSE(check_conservation(t));
}

TEST(Conservation, OffsetPresentFromTheStartIsOnlyAConservationFailure) {
  std::vector<OpponentStrategy> fam;
  Trace t = default_trace(300, &fam);
  t.initial_gamblers.beyond_total += 1;
  for (auto& row : t.rows) row.gambler_values.beyond_total += 1;
  for (const auto& [name, r] : verify_trace(t, fam)) EXPECT_EQ(r.ok, name != "conservation") << name;
}

TEST(Bookkeeping, EmptyFamilyIsAllGrants) {
  Trace t = build_b(parse_oracle("periodic:01"), {}, 100).trace;
  BookkeepingReport r = check_bookkeeping(t);
  EXPECT_TRUE(r);
  EXPECT_EQ(r.beyond.g_only_up, 100u);
}

TEST(Bookkeeping, CountersRebuildEveryGambler) {
  Trace t = default_trace(2000);
  BookkeepingReport r = check_bookkeeping(t);
  ASSERT_TRUE(r) << r.result.detail;
  std::size_t moves = r.beyond.moves();
  for (std::size_t e = 0; e < r.per_opponent.size(); ++e) {
    const StageCounters& c = r.per_opponent[e];
    EXPECT_EQ(c.unclassified, 0u);
    EXPECT_EQ(Capital(c.both_up + c.g_only_up - c.both_down), t.rows.back().gambler_values.opponents[e]);
    moves += c.moves();
  }
  EXPECT_EQ(moves, t.rows.size());
}

TEST(Bookkeeping, TwoQuantumJumpIsCaught) {
  Trace t = default_trace(200);
  // acting gambler jumps by 2 while another pays 1: the total still conserves
  StageRecord& row = t.rows[150];
  ASSERT_GE(row.acting_e, t.family_size());
  ASSERT_FALSE(row.gambler_values.opponents[0].is_zero());
  row.gambler_values.beyond_total += 1;
  row.gambler_values.opponents[0] -= 1;
  for (std::size_t i = 151; i < t.rows.size(); ++i) {
    t.rows[i].gambler_values.beyond_total += 1;
    t.rows[i].gambler_values.opponents[0] -= 1;
  }
  EXPECT_FALSE(check_bookkeeping(t));
  EXPECT_TRUE(check_conservation(t));
}

TEST(RatioMonotonicity, HoldsAndCatchesAnInjectedDrop) {
  Trace t = default_trace(300);
  CheckResult ok = check_ratio_monotonicity(t);
  EXPECT_TRUE(ok);
  EXPECT_GT(ok.checked, 0u);
  for (auto& row : t.rows) {
    if (row.reason != AttentionReason::clause2c) continue;
    row.opponent_values[row.acting_e].value = EvalResult(Capital(1000000));
    break;
  }
  EXPECT_FALSE(check_ratio_monotonicity(t));
}

TEST(SublemmaAgreement, HoldsOnConstructedTraces) {
  CheckResult r = check_sublemma_agreement(default_trace(1000));
  EXPECT_TRUE(r) << r.detail;
  EXPECT_GT(r.checked, 0u);
}

TEST(Priority, ReplayAgreesAndCatchesAReorderedRow) {
  std::vector<OpponentStrategy> fam;
  Trace t = default_trace(400, &fam);
  EXPECT_TRUE(check_priority(t, fam));
  t.rows[0].acting_e = 3;
  EXPECT_FALSE(check_priority(t, fam));
}

TEST(ActivityMonotone, CatchesReactivation) {
  std::vector<OpponentStrategy> fam;
  Trace t = default_trace(100, &fam);
  EXPECT_TRUE(check_activity_monotone(t));
  ASSERT_FALSE(t.rows[50].opponent_values[3].active);
  t.rows[50].opponent_values[3].active = true;
  EXPECT_FALSE(check_activity_monotone(t));
}

TEST(Defeat, SaverIsSettled) {
  OracleSequence a = seeded_oracle(3);
  auto fam = make_family(parse_strategy_spec("s saver c=5"), a);
  DefeatReport r = analyze_defeat(build_b(a, fam, 100).trace, fam);
  ASSERT_EQ(r.opponents.size(), 1u);
  EXPECT_EQ(r.opponents[0].last_bet_stage, std::nullopt);
  EXPECT_EQ(r.opponents[0].sup_capital, Capital(5));
  EXPECT_EQ(r.opponents[0].status, DefeatStatus::settled);
}

TEST(Defeat, EscalatorIsBankrupted) {
  std::vector<OpponentStrategy> fam;
  Trace t = default_trace(3000, &fam);
  DefeatReport r = analyze_defeat(t, fam);
  const OpponentDefeat& esc = r.opponents[1];
  EXPECT_EQ(esc.status, DefeatStatus::defeated);
  ASSERT_TRUE(esc.last_bet_stage.has_value());
  EXPECT_EQ(esc.final_value, EvalResult(Capital{}));
  EXPECT_GE(esc.sup_capital, Capital(8));
}

TEST(Defeat, CopycatIsUndefeated) {
  OracleSequence a = seeded_oracle(42);
  auto fam = make_family(parse_strategy_spec("cc copycat capital=3"), a);
  DefeatReport r = analyze_defeat(build_b(a, fam, 1000).trace, fam);
  EXPECT_EQ(r.opponents[0].status, DefeatStatus::undefeated);
  EXPECT_EQ(r.opponents[0].last_bet_stage, 1000u);
}

TEST(Defeat, WindowIsConfigurable) {
  OracleSequence a = seeded_oracle(42);
  auto fam = make_family(parse_strategy_spec("b constant_bettor k=1 guess=all_ones capital=6"), a);
  Trace t = build_b(a, fam, 200).trace;
  DefeatReport wide = analyze_defeat(t, fam, 200);
  DefeatReport none = analyze_defeat(t, fam, 0);
  EXPECT_EQ(wide.opponents[0].status, DefeatStatus::undefeated);
  EXPECT_NE(none.opponents[0].status, DefeatStatus::undefeated);
}

TEST(Defeat, FamilyMismatchIsRejected) {
  std::vector<OpponentStrategy> fam;
  Trace t = default_trace(10, &fam);
  fam.pop_back();
  EXPECT_THROW(analyze_defeat(t, fam), std::invalid_argument);
  auto renamed = make_family(parse_strategy_spec(
                                 "x constant_bettor k=1 guess=alternating\nesc escalator k0=1\nsave saver c=5\n"
                                 "part partial_after d=3\nmaj saver c=1"),
                             seeded_oracle(42));
  EXPECT_THROW(analyze_defeat(t, renamed), std::invalid_argument);
}

}  // namespace
}  // namespace ivr
