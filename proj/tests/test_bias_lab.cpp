#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mabbias/bias_lab.hpp"
#include "mabbias/error.hpp"

using namespace mabbias;

namespace {

ExperimentDesign e1_design() {
  return {{ArmSpec::normal(0, 1)},
          RuleSet{sampling::SingleArm{}, stopping::MinOf{{stopping::UpperBoundary{0.2, 2}, stopping::FixedTime{10}}},
                  choosing::Fixed{1}},
          10};
}

EstimateOptions e1_options(std::int64_t reps) {
  EstimateOptions o;
  o.reps = reps;
  o.base_seed = 42;
  o.conditions = {ConditionSpec::marginal(), ConditionSpec::early_stop(), ConditionSpec::line_cross()};
  o.functionals = {FunctionalSpec::mean(), FunctionalSpec::variance()};
  o.grid = CdfGrid::equispaced(-2, 2, 9);
  o.chunk_size = 64;
  return o;
}

std::string csv(const BiasReport& r) {
  std::ostringstream out;
  write_csv(out, r);
  return out.str();
}

}  // namespace

TEST(SignVerdict, Examples) {
  EXPECT_EQ(sign_verdict(0.22, 0.003), Verdict::positive);
  EXPECT_EQ(sign_verdict(0.0, 0.01), Verdict::indeterminate);
  EXPECT_EQ(sign_verdict(-0.16, 0.004), Verdict::negative);
  EXPECT_EQ(sign_verdict(0.03, 0.01), Verdict::indeterminate);  // exactly 3 SE is not enough
  EXPECT_EQ(sign_verdict(0.0, 0.0), Verdict::indeterminate);
  EXPECT_EQ(sign_verdict(1e-9, 0.0), Verdict::positive);
  EXPECT_EQ(sign_verdict(5.0, std::numeric_limits<double>::infinity()), Verdict::indeterminate);
  EXPECT_THROW(sign_verdict(0.1, -1.0), ArgumentError);
}

TEST(Moments, StandardError) {
  Moments m;
  EXPECT_TRUE(std::isinf(m.standard_error()));
  m.add(1.0);
  EXPECT_TRUE(std::isinf(m.standard_error()));
  m.add(3.0);
  m.add(5.0);
  EXPECT_DOUBLE_EQ(m.mean(), 3.0);
  EXPECT_NEAR(m.standard_error(), 2.0 / std::sqrt(3.0), 1e-14);
  Moments c;
  for (int i = 0; i < 5; ++i) c.add(0.25);
  EXPECT_TRUE(c.degenerate());
  EXPECT_EQ(c.standard_error(), 0.0);
}

TEST(Conditions, LabelsRoundTrip) {
  for (const auto& c : {ConditionSpec::marginal(), ConditionSpec::early_stop(), ConditionSpec::line_cross(),
                        ConditionSpec::accept_h0(), ConditionSpec::accept_h1(), ConditionSpec::reach_max(),
                        ConditionSpec::chosen(2), ConditionSpec::not_chosen(13)})
    EXPECT_EQ(ConditionSpec::parse(c.label()), c);
  EXPECT_EQ(ConditionSpec::accept_h0().label(), "accept_H0");
  EXPECT_THROW(ConditionSpec::parse("chosen(0)"), ArgumentError);
  EXPECT_THROW(ConditionSpec::parse("chosen(x)"), ArgumentError);
  EXPECT_THROW(ConditionSpec::parse("sometimes"), ArgumentError);
}

TEST(Merge, IdentityAndAdditivity) {
  const auto d = e1_design();
  const auto o = e1_options(300);
  const auto a = aggregate_trials(d, o, 0, 100);
  const auto b = aggregate_trials(d, o, 100, 300);
  const PartialAggregate empty(a.shape(), 0, 0);
  const auto ae = merge(a, empty);
  EXPECT_EQ(csv(summarize(ae, d, o)), csv(summarize(a, d, o)));
  const auto ab = merge(a, b);
  EXPECT_EQ(ab.completed, a.completed + b.completed);
  for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(ab.condition_count(c), a.condition_count(c) + b.condition_count(c));
  EXPECT_EQ(ab.slot(0, 1, 0).n, a.slot(0, 1, 0).n + b.slot(0, 1, 0).n);
  EXPECT_THROW(merge(a, aggregate_trials(d, o, 50, 150)), ArgumentError);
}

TEST(Merge, MatchesSingleBlockUpToRounding) {
  const auto d = e1_design();
  const auto o = e1_options(1000);
  const auto whole = aggregate_trials(d, o, 0, 1000);
  auto pieces = aggregate_trials(d, o, 0, 400);
  pieces = merge(pieces, aggregate_trials(d, o, 400, 1000));
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_EQ(whole.condition_count(c), pieces.condition_count(c));
    EXPECT_EQ(whole.slot(c, 1, 0).n, pieces.slot(c, 1, 0).n);
    EXPECT_NEAR(whole.slot(c, 1, 0).sum, pieces.slot(c, 1, 0).sum, 1e-9);
  }
}

TEST(Estimate, WorkerCountDoesNotChangeOutput) {
  const auto d = e1_design();
  auto o = e1_options(5000);
  const auto one = csv(estimate(d, o));
  o.threads = 4;
  EXPECT_EQ(csv(estimate(d, o)), one);
  o.threads = 8;
  EXPECT_EQ(csv(estimate(d, o)), one);
}

TEST(Estimate, SeedChangesOutput) {
  const auto d = e1_design();
  auto o = e1_options(2000);
  const auto a = csv(estimate(d, o));
  o.base_seed = 43;
  EXPECT_NE(csv(estimate(d, o)), a);
}

TEST(Estimate, PartitionAndDuality) {
  const auto d = e1_design();
  const auto r = estimate(d, e1_options(20000));
  EXPECT_EQ(r.condition("early_stop").n + r.condition("line_cross").n, r.total_reps);
  EXPECT_NEAR(r.condition("early_stop").probability + r.condition("line_cross").probability, 1.0, 1e-12);
  for (const auto& cs : r.conditions) {
    const auto& a = cs.arm(1);
    const auto v = a.statistic("mean").verdict;
    bool all_ge = true, all_le = true;
    for (double b : a.cdf.bias) {
      all_ge = all_ge && b >= 0;
      all_le = all_le && b <= 0;
    }
    if (v == Verdict::positive) EXPECT_FALSE(all_ge && !all_le) << cs.condition.label();
    if (v == Verdict::negative) EXPECT_FALSE(all_le && !all_ge) << cs.condition.label();
  }
}

TEST(Estimate, NonadaptiveIsUnbiased) {
  const ExperimentDesign d{{ArmSpec::normal(0.3, 2.0)},
                           RuleSet{sampling::SingleArm{}, stopping::FixedTime{5}, choosing::Fixed{1}}, 5};
  EstimateOptions o;
  o.reps = 20000;
  o.conditions = {ConditionSpec::marginal()};
  o.functionals = {FunctionalSpec::mean(), FunctionalSpec::variance()};
  const auto r = estimate(d, o);
  for (const auto& s : r.condition("marginal").arm(1).statistics) EXPECT_LT(std::abs(s.bias), 4 * s.se) << s.name;
}

TEST(Estimate, EmptyConditionAndTruncation) {
  const ExperimentDesign d{{ArmSpec::normal(0, 1), ArmSpec::normal(0, 1)},
                           RuleSet{sampling::AlternateTwoArms{}, stopping::FixedTime{50}, choosing::ArgmaxMean{}}, 10};
  EstimateOptions o;
  o.reps = 100;
  o.conditions = {ConditionSpec::marginal(), ConditionSpec::chosen(1)};
  const auto r = estimate(d, o);
  EXPECT_EQ(r.truncated, 100);
  EXPECT_EQ(r.completed, 0);
  EXPECT_TRUE(r.has_empty_condition());
  EXPECT_NE(csv(r).find("marginal,,,,,,empty_condition,0"), std::string::npos);
}

TEST(Estimate, VarianceSkippedBelowTwoSamples) {
  auto d = e1_design();
  d.algorithm = RuleSet{sampling::SingleArm{}, stopping::FixedTime{1}, choosing::Fixed{1}};
  auto o = e1_options(50);
  o.conditions = {ConditionSpec::marginal()};
  const auto r = estimate(d, o);
  EXPECT_EQ(r.condition("marginal").arm(1).statistic("variance").n, 0);
  EXPECT_EQ(r.condition("marginal").arm(1).statistic("mean").n, 50);
}

TEST(Estimate, DegenerateCdfColumnsUseBinomialError) {
  const auto d = e1_design();
  auto o = e1_options(200);
  o.grid = CdfGrid({-30.0, 0.0, 30.0});
  const auto r = estimate(d, o);
  const auto& cdf = r.condition("marginal").arm(1).cdf;
  EXPECT_EQ(cdf.estimate[0], 0.0);
  EXPECT_EQ(cdf.estimate[2], 1.0);
  EXPECT_GT(cdf.se[1], 0.0);
  EXPECT_GE(cdf.se[0], 0.0);
}

TEST(Estimate, CsvSchema) {
  const auto r = estimate(e1_design(), e1_options(500));
  const auto text = csv(r);
  EXPECT_EQ(text.substr(0, text.find('\n')), "condition,arm,statistic,estimate,bias,se,verdict,n");
  for (const char* stat : {"marginal,1,mean,", "early_stop,1,variance,", "line_cross,1,cdf_min,", "line_cross,1,cdf_max,",
                           "marginal,1,cdf@0,"})
    EXPECT_NE(text.find(stat), std::string::npos) << stat;
}

TEST(Estimate, ConfigurationErrors) {
  auto o = e1_options(10);
  o.reps = 0;
  EXPECT_THROW(estimate(e1_design(), o), ConfigError);
  o = e1_options(10);
  o.conditions = {ConditionSpec::chosen(2)};
  EXPECT_THROW(estimate(e1_design(), o), ConfigError);
}
