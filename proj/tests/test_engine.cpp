#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "mabbias/engine.hpp"
#include "mabbias/error.hpp"

using namespace mabbias;

namespace {

std::vector<ArmSpec> normals(std::initializer_list<double> means) {
  std::vector<ArmSpec> arms;
  for (double m : means) arms.push_back(ArmSpec::normal(m, 1.0));
  return arms;
}

RuleSet e1_rules() {
  return RuleSet{sampling::SingleArm{}, stopping::MinOf{{stopping::UpperBoundary{0.2, 1}, stopping::FixedTime{10}}},
                 choosing::Fixed{1}};
}

RuleSet lil_rules() { return RuleSet{sampling::LilUcb{}, stopping::CountDominance{1.0}, choosing::ArgmaxCount{}}; }

// Replays the pull sequence through a fresh state.
std::vector<TrialState> prefix_states(const Trace& trace) {
  std::vector<TrialState> states;
  TrialState s(trace.final_state.arm_count());
  for (std::size_t i = 0; i < trace.actions.size(); ++i) {
    s.record(trace.actions[i], trace.rewards[i]);
    states.push_back(s);
  }
  return states;
}

}  // namespace

TEST(RunTrial, FixedTimeOnDegenerateArm) {
  const RewardTable table(1, {ArmSpec::bernoulli(1.0)});
  const auto t = run_trial(table, RandomnessSource(1), RuleSet{sampling::SingleArm{}, stopping::FixedTime{3}, choosing::Fixed{1}}, 100);
  EXPECT_EQ(t.stop_time, 3);
  EXPECT_EQ(t.final_state.count(1), 3);
  EXPECT_EQ(t.final_state.mean(1), 1.0);
  EXPECT_EQ(t.stop_reason, StopReason::max_time);
  EXPECT_FALSE(t.truncated);
  EXPECT_EQ(t.kappa, 1);
}

TEST(RunTrial, EarlyCrossOnFirstCell) {
  const auto table = RewardTable(4, normals({0.0})).with_cell_overridden(1, 1, 2.0);
  const auto t = run_trial(table, RandomnessSource(0), e1_rules(), 10);
  EXPECT_EQ(t.stop_time, 1);
  EXPECT_EQ(t.stop_reason, StopReason::upper_cross);
}

TEST(RunTrial, AlternatingSequence) {
  const RewardTable table(2, normals({0.0, 0.0}));
  const auto t = run_trial(table, RandomnessSource(0),
                           RuleSet{sampling::AlternateTwoArms{}, stopping::FixedTime{6}, choosing::ArgmaxMean{}}, 100);
  EXPECT_EQ(t.actions, (std::vector<int>{1, 2, 1, 2, 1, 2}));
}

TEST(RunTrial, TruncationAtCap) {
  const RewardTable table(2, normals({0.0}));
  const auto t = run_trial(table, RandomnessSource(0),
                           RuleSet{sampling::SingleArm{}, stopping::FixedTime{50}, choosing::Fixed{1}}, 7);
  EXPECT_TRUE(t.truncated);
  EXPECT_EQ(t.stop_time, 7);
  EXPECT_EQ(t.stop_reason, StopReason::truncated);
}

TEST(RunTrial, RowBookkeeping) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const RewardTable table(seed, normals({1.0, 0.5, 0.0}));
    const auto t = run_trial(table, RandomnessSource(seed), lil_rules(), 1'000'000);
    std::vector<std::int64_t> seen(3, 0);
    for (std::size_t s = 0; s < t.actions.size(); ++s) {
      const int k = t.actions[s];
      EXPECT_EQ(t.rewards[s], table.cell(++seen[static_cast<std::size_t>(k - 1)], k));
    }
    for (int k = 1; k <= 3; ++k) EXPECT_EQ(t.final_state.count(k), seen[static_cast<std::size_t>(k - 1)]);
  }
}

TEST(RunTrial, StopMinimality) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const RewardTable t1(seed, normals({0.0}));
    const auto e1 = run_trial(t1, RandomnessSource(seed), e1_rules(), 10);
    const auto states1 = prefix_states(e1);
    for (std::int64_t t = 1; t < e1.stop_time; ++t)
      EXPECT_FALSE(should_stop(e1_rules().stopping, states1[static_cast<std::size_t>(t - 1)]).stop);
    EXPECT_TRUE(should_stop(e1_rules().stopping, states1.back()).stop);

    const RewardTable t3(seed, normals({1.0, 0.5, 0.0}));
    const auto lil = run_trial(t3, RandomnessSource(seed), lil_rules(), 1'000'000);
    ASSERT_FALSE(lil.truncated);
    const auto states3 = prefix_states(lil);
    for (std::int64_t t = 3; t < lil.stop_time; ++t)
      EXPECT_FALSE(should_stop(lil_rules().stopping, states3[static_cast<std::size_t>(t - 1)]).stop) << seed << ' ' << t;
    const auto& c = lil.final_state.counts();
    const auto total = c[0] + c[1] + c[2];
    EXPECT_TRUE(std::any_of(c.begin(), c.end(), [&](auto n) { return n >= 1 + (total - n); }));
    EXPECT_EQ(lil.kappa, static_cast<int>(std::max_element(c.begin(), c.end()) - c.begin()) + 1);
  }
}

TEST(RunTrial, Deterministic) {
  const RewardTable table(77, normals({1.0, 0.5, 0.0}));
  const auto a = run_trial(table, RandomnessSource(5), lil_rules(), 1'000'000);
  const auto b = run_trial(table, RandomnessSource(5), lil_rules(), 1'000'000);
  EXPECT_EQ(a.actions, b.actions);
  EXPECT_EQ(a.rewards, b.rewards);
  EXPECT_EQ(a.kappa, b.kappa);
}

TEST(Halving, RoundBudgets) {
  EXPECT_EQ(halving_rounds(3), 2);
  EXPECT_EQ(halving_rounds(2), 1);
  EXPECT_EQ(halving_rounds(4), 2);
  EXPECT_EQ(halving_rounds(5), 3);
  EXPECT_EQ(halving_round_budget(10, 3, 3), 1);
  EXPECT_EQ(halving_round_budget(10, 2, 3), 2);
  for (int k : {2, 3, 4, 8}) EXPECT_EQ(halving_round_budget(k * halving_rounds(k), k, k), 1);
  EXPECT_EQ(halving_max_pulls_per_arm(10, 3), 3);
  EXPECT_EQ(halving_max_pulls_per_arm(12, 3), 5);
}

TEST(Halving, KThreeBudgetTen) {
  const RewardTable table(3, normals({1.0, 0.5, 0.0}));
  const auto t = run_sequential_halving(table, 10);
  EXPECT_EQ(t.stop_time, 7);
  EXPECT_EQ(t.stop_reason, StopReason::halving_complete);
  std::vector<int> first(t.actions.begin(), t.actions.begin() + 3);
  EXPECT_EQ(first, (std::vector<int>{1, 2, 3}));
  std::set<int> second(t.actions.begin() + 3, t.actions.end());
  EXPECT_EQ(second.size(), 2u);
  EXPECT_TRUE(second.count(t.kappa));
}

TEST(Halving, KTwoBudgetFourPicksLargerMean) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const RewardTable table(seed, normals({0.0, 0.0}));
    const auto t = run_sequential_halving(table, 4);
    ASSERT_EQ(t.stop_time, 4);
    const double m1 = table.cell(1, 1) + table.cell(2, 1), m2 = table.cell(1, 2) + table.cell(2, 2);
    EXPECT_EQ(t.kappa, m2 > m1 ? 2 : 1);
  }
}

TEST(Halving, DegenerateArms) {
  const RewardTable table(0, {ArmSpec::bernoulli(0), ArmSpec::bernoulli(1), ArmSpec::bernoulli(0), ArmSpec::bernoulli(0)});
  EXPECT_EQ(run_sequential_halving(table, 16).kappa, 2);
  const RewardTable first(0, {ArmSpec::bernoulli(1), ArmSpec::bernoulli(0), ArmSpec::bernoulli(0), ArmSpec::bernoulli(0)});
  EXPECT_EQ(run_sequential_halving(first, 16).kappa, 1);
}

TEST(Halving, ActiveSetHalvesEachRound) {
  for (int arms : {2, 3, 5, 8}) {
    const std::int64_t budget = 64;
    std::vector<ArmSpec> laws(static_cast<std::size_t>(arms), ArmSpec::normal(0, 1));
    const auto t = run_sequential_halving(RewardTable(9, laws), budget);
    std::size_t pos = 0;
    int active = arms;
    for (int r = 1; r <= halving_rounds(arms); ++r) {
      const auto m = halving_round_budget(budget, active, arms);
      std::set<int> pulled(t.actions.begin() + static_cast<long>(pos), t.actions.begin() + static_cast<long>(pos + m * active));
      EXPECT_EQ(static_cast<int>(pulled.size()), active);
      pos += static_cast<std::size_t>(m * active);
      active = (active + 1) / 2;
    }
    EXPECT_EQ(active, 1);
    EXPECT_EQ(pos, t.actions.size());
  }
}

TEST(Halving, InsufficientBudget) {
  EXPECT_THROW(run_sequential_halving(RewardTable(0, normals({0, 0, 0})), 5), ConfigError);
  EXPECT_THROW(run_sequential_halving(RewardTable(0, normals({0})), 5), ConfigError);
}

TEST(Trace, CountsAtAndCsv) {
  const RewardTable table(1, {ArmSpec::bernoulli(1.0), ArmSpec::bernoulli(0.0)});
  const auto t = run_trial(table, RandomnessSource(0),
                           RuleSet{sampling::AlternateTwoArms{}, stopping::FixedTime{3}, choosing::ArgmaxMean{}}, 10);
  EXPECT_EQ(t.counts_at(0), (std::vector<std::int64_t>{0, 0}));
  EXPECT_EQ(t.counts_at(3), (std::vector<std::int64_t>{2, 1}));
  EXPECT_EQ(t.counts_at(99), (std::vector<std::int64_t>{2, 1}));
  std::ostringstream out;
  write_trace_csv(out, t);
  EXPECT_EQ(out.str(), "t,A_t,Y_t,N_1,N_2\n1,1,1,1,0\n2,2,0,1,1\n3,1,1,2,1\n");
}
