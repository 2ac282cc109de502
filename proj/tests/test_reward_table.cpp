#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "mabbias/error.hpp"
#include "mabbias/reward_table.hpp"

using namespace mabbias;

namespace {
RewardTable normal_table(std::uint64_t seed, int arms = 2) {
  return RewardTable(seed, std::vector<ArmSpec>(static_cast<std::size_t>(arms), ArmSpec::normal(0, 1)));
}
}  // namespace

TEST(RewardTable, DegenerateBernoulli) {
  const RewardTable t(3, {ArmSpec::bernoulli(1.0), ArmSpec::bernoulli(0.0)});
  for (std::int64_t i = 1; i <= 50; ++i) {
    EXPECT_EQ(t.cell(i, 1), 1.0);
    EXPECT_EQ(t.cell(i, 2), 0.0);
  }
}

TEST(RewardTable, CellsArePure) {
  const auto a = normal_table(11), b = normal_table(11);
  EXPECT_EQ(a.cell(5, 2), a.cell(5, 2));
  for (std::int64_t i = 1; i <= 100; ++i) EXPECT_EQ(a.cell(i, 1), b.cell(i, 1));
}

TEST(RewardTable, SeedsAndCellsDiffer) {
  const auto a = normal_table(1), b = normal_table(2);
  std::set<double> seen;
  for (std::int64_t i = 1; i <= 200; ++i) {
    EXPECT_NE(a.cell(i, 1), b.cell(i, 1));
    seen.insert(a.cell(i, 1));
    seen.insert(a.cell(i, 2));
  }
  EXPECT_EQ(seen.size(), 400u);
}

TEST(RewardTable, OverrideReadsBackAndIsLocal) {
  const auto t = normal_table(5);
  const auto o = t.with_cell_overridden(3, 1, 9.9);
  EXPECT_EQ(o.cell(3, 1), 9.9);
  EXPECT_EQ(o.cell(2, 1), t.cell(2, 1));
  EXPECT_EQ(o.cell(3, 2), t.cell(3, 2));
  EXPECT_NE(t.cell(3, 1), 9.9);  // original untouched

  const auto p = t.with_cell_overridden(1, 1, -4.0);
  EXPECT_EQ(p.cell(1, 2), t.cell(1, 2));
}

TEST(RewardTable, ChainedOverrides) {
  const auto t = normal_table(5).with_cell_overridden(1, 1, 1.5).with_cell_overridden(2, 2, -0.5);
  EXPECT_EQ(t.cell(1, 1), 1.5);
  EXPECT_EQ(t.cell(2, 2), -0.5);
  EXPECT_EQ(t.overrides().size(), 2u);
  const auto u = t.with_cell_overridden(1, 1, 7.0);
  EXPECT_EQ(u.cell(1, 1), 7.0);
  EXPECT_EQ(u.overrides().size(), 2u);
}

TEST(RewardTable, BulkOverrideLaterEntriesWin) {
  const auto t = normal_table(8).with_cells_overridden({{{2, 1}, 1.0}, {{2, 1}, 2.0}, {{1, 2}, 3.0}});
  EXPECT_EQ(t.cell(2, 1), 2.0);
  EXPECT_EQ(t.cell(1, 2), 3.0);
}

TEST(RewardTable, OverrideDoesNotTouchExternalRandomness) {
  const RandomnessSource w(99);
  const double before = w.draw(4);
  (void)normal_table(99).with_cell_overridden(4, 1, 0.0);
  EXPECT_EQ(w.draw(4), before);
}

TEST(RewardTable, IndexValidation) {
  const auto t = normal_table(1);
  EXPECT_THROW(t.cell(0, 1), ArgumentError);
  EXPECT_THROW(t.cell(1, 0), ArgumentError);
  EXPECT_THROW(t.cell(1, 3), ArgumentError);
  EXPECT_THROW(t.with_cell_overridden(0, 1, 1.0), ArgumentError);
  EXPECT_THROW(RewardTable(1, {}), ArgumentError);
}

TEST(RewardTable, NormalColumnMoments) {
  const auto t = normal_table(2024, 1);
  const int n = 1'000'000;
  double sum = 0, sumsq = 0;
  for (std::int64_t i = 1; i <= n; ++i) {
    const double x = t.cell(i, 1);
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  const double var = (sumsq - n * mean * mean) / (n - 1);
  EXPECT_NEAR(mean, 0.0, 0.005);
  EXPECT_NEAR(var, 1.0, 0.01);
}

TEST(RewardTable, BernoulliFrequency) {
  const RewardTable t(17, {ArmSpec::bernoulli(0.3)});
  const int n = 200'000;
  int ones = 0;
  for (std::int64_t i = 1; i <= n; ++i) ones += t.cell(i, 1) == 1.0;
  EXPECT_NEAR(ones / double(n), 0.3, 4 * std::sqrt(0.21 / n));
}

TEST(RandomnessSource, OpenUnitAndPure) {
  const RandomnessSource w(3);
  for (std::int64_t t = 1; t <= 10000; ++t) {
    const double u = w.draw(t);
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_EQ(u, RandomnessSource(3).draw(t));
  }
  EXPECT_NE(RandomnessSource(3).draw(1), RandomnessSource(4).draw(1));
}

TEST(Hashing, OpenUnitExtremes) {
  EXPECT_GT(hashing::to_open_unit(0), 0.0);
  EXPECT_LT(hashing::to_open_unit(~0ULL), 1.0);
  EXPECT_LT(hashing::to_open_unit(0), hashing::to_open_unit(1ULL << 12));
}

TEST(Hashing, DomainsSeparate) {
  EXPECT_NE(hashing::hash_words(hashing::Domain::reward_cell, {1, 2}),
            hashing::hash_words(hashing::Domain::external, {1, 2}));
  EXPECT_NE(hashing::hash_words(hashing::Domain::reward_cell, {1, 2}),
            hashing::hash_words(hashing::Domain::reward_cell, {2, 1}));
}
