#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "mabbias/arm.hpp"
#include "mabbias/condition.hpp"
#include "mabbias/engine.hpp"
#include "mabbias/stats.hpp"

namespace mabbias {

enum class Verdict { positive, negative, indeterminate };

std::string_view label(Verdict verdict) noexcept;

/// positive if bias > z*se, negative if bias < -z*se, else indeterminate.
Verdict sign_verdict(double bias, double se, double z = 3.0);

/// Count, sum and sum of squares of one statistic, plus its range (exact
/// degeneracy detection).
struct Moments {
  std::int64_t n = 0;
  double sum = 0.0;
  double sumsq = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  void add(double x) noexcept;
  void merge(const Moments& other) noexcept;
  double mean() const noexcept;
  /// Sample SD / sqrt(n); +inf for n < 2, exactly 0 when all values are equal.
  double standard_error() const noexcept;
  bool degenerate() const noexcept { return n > 0 && min == max; }
};

struct AggregateShape {
  std::size_t conditions = 0;
  int arms = 0;
  std::size_t functionals = 0;
  std::size_t grid = 0;

  std::size_t slots_per_arm() const noexcept { return functionals + grid; }
  bool operator==(const AggregateShape&) const = default;
};

/// Sufficient statistics of a contiguous block of trials [first, last).
class PartialAggregate {
 public:
  PartialAggregate(AggregateShape shape, std::int64_t first, std::int64_t last);

  const AggregateShape& shape() const noexcept { return shape_; }
  std::int64_t first_trial() const noexcept { return first_; }
  std::int64_t last_trial() const noexcept { return last_; }
  bool empty() const noexcept { return first_ == last_; }

  /// Slot s < functionals is functional s; functionals + g is grid point g.
  Moments& slot(std::size_t condition, int arm, std::size_t s);
  const Moments& slot(std::size_t condition, int arm, std::size_t s) const;
  std::int64_t& condition_count(std::size_t condition) { return condition_counts_.at(condition); }
  std::int64_t condition_count(std::size_t condition) const { return condition_counts_.at(condition); }

  std::int64_t completed = 0;
  std::int64_t truncated = 0;

  friend PartialAggregate merge(const PartialAggregate& a, const PartialAggregate& b);

 private:
  AggregateShape shape_;
  std::int64_t first_;
  std::int64_t last_;
  std::vector<std::int64_t> condition_counts_;
  std::vector<Moments> slots_;
};

/// Adds b's statistics to a's. Ranges must be disjoint; shapes equal.
PartialAggregate merge(const PartialAggregate& a, const PartialAggregate& b);

struct ExperimentDesign {
  std::vector<ArmSpec> arms;
  Algorithm algorithm{HalvingSpec{}};
  std::int64_t horizon_cap = 1'000'000;
};

struct EstimateOptions {
  std::int64_t reps = 100'000;
  std::uint64_t base_seed = 0;
  CdfGrid grid = CdfGrid::standard();
  std::vector<ConditionSpec> conditions;
  std::vector<FunctionalSpec> functionals{FunctionalSpec::mean()};
  int threads = 1;
  std::int64_t chunk_size = 1000;  // reduction granularity; independent of threads
  double z = 3.0;
};

std::uint64_t trial_table_seed(std::uint64_t base_seed, std::int64_t rep) noexcept;
std::uint64_t trial_randomness_seed(std::uint64_t base_seed, std::int64_t rep) noexcept;

/// Runs trials [first, last) and aggregates them in order.
PartialAggregate aggregate_trials(const ExperimentDesign& design, const EstimateOptions& options, std::int64_t first,
                                  std::int64_t last);

/// Fold of the records of one trial into an aggregate (the trial must lie in its range).
void accumulate(PartialAggregate& agg, const Trace& trace, const EstimateOptions& options);

struct StatisticSummary {
  std::string name;
  double estimate = 0.0;
  double reference = 0.0;
  double bias = 0.0;
  double se = 0.0;
  std::int64_t n = 0;
  Verdict verdict = Verdict::indeterminate;
};

struct CdfSummary {
  std::vector<double> estimate;
  std::vector<double> reference;
  std::vector<double> bias;
  std::vector<double> se;
  std::int64_t n = 0;
  std::size_t argmin = 0;
  std::size_t argmax = 0;

  double min_bias() const { return bias.at(argmin); }
  double max_bias() const { return bias.at(argmax); }
  /// Every point satisfies bias >= -z*se (curve at or above the true CDF).
  bool above_truth_within(double z) const;
  /// Every point satisfies bias <= z*se.
  bool below_truth_within(double z) const;
};

struct ArmSummary {
  int arm = 0;
  std::vector<StatisticSummary> statistics;
  CdfSummary cdf;

  const StatisticSummary& statistic(std::string_view name) const;
};

struct ConditionSummary {
  ConditionSpec condition;
  std::int64_t n = 0;
  double probability = 0.0;
  std::vector<ArmSummary> arms;  // empty when n == 0

  bool empty() const noexcept { return n == 0; }
  const ArmSummary& arm(int k) const;
};

struct BiasReport {
  std::int64_t total_reps = 0;
  std::int64_t completed = 0;
  std::int64_t truncated = 0;
  std::uint64_t seed = 0;
  double z = 3.0;
  CdfGrid grid = CdfGrid::standard();
  std::vector<ConditionSummary> conditions;

  const ConditionSummary& condition(std::string_view label) const;
  bool has_empty_condition() const;
};

BiasReport summarize(const PartialAggregate& agg, const ExperimentDesign& design, const EstimateOptions& options);

/// Monte Carlo estimate of marginal and conditional biases. Output is
/// bit-identical for any thread count.
BiasReport estimate(const ExperimentDesign& design, const EstimateOptions& options);

/// CSV rows `condition,arm,statistic,estimate,bias,se,verdict,n`.
void write_csv(std::ostream& out, const BiasReport& report);

}  // namespace mabbias
