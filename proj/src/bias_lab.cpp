#include "mabbias/bias_lab.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <thread>
#include <utility>

#include "mabbias/error.hpp"
#include "mabbias/reward_table.hpp"

namespace mabbias {

std::string_view label(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::positive: return "positive";
    case Verdict::negative: return "negative";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "?";
}

Verdict sign_verdict(double bias, double se, double z) {
  if (!(se >= 0.0)) throw ArgumentError("standard error must be nonnegative");
  if (!(z >= 0.0)) throw ArgumentError("z must be nonnegative");
  if (bias > z * se) return Verdict::positive;
  if (bias < -z * se) return Verdict::negative;
  return Verdict::indeterminate;
}

void Moments::add(double x) noexcept {
  ++n;
  sum += x;
  sumsq += x * x;
  if (x < min) min = x;
  if (x > max) max = x;
}

void Moments::merge(const Moments& other) noexcept {
  n += other.n;
  sum += other.sum;
  sumsq += other.sumsq;
  if (other.min < min) min = other.min;
  if (other.max > max) max = other.max;
}

double Moments::mean() const noexcept {
  return n > 0 ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

double Moments::standard_error() const noexcept {
  if (n < 2) return std::numeric_limits<double>::infinity();
  if (min == max) return 0.0;
  const double dn = static_cast<double>(n);
  double var = (sumsq - sum * sum / dn) / (dn - 1.0);
  if (var < 0.0) var = 0.0;
  return std::sqrt(var / dn);
}

PartialAggregate::PartialAggregate(AggregateShape shape, std::int64_t first, std::int64_t last)
    : shape_(shape), first_(first), last_(last) {
  if (first > last) throw ArgumentError("aggregate range must have first <= last");
  if (shape.arms < 1) throw ArgumentError("aggregate needs at least one arm");
  condition_counts_.assign(shape.conditions, 0);
  slots_.resize(shape.conditions * static_cast<std::size_t>(shape.arms) * shape.slots_per_arm());
}

Moments& PartialAggregate::slot(std::size_t condition, int arm, std::size_t s) {
  return const_cast<Moments&>(std::as_const(*this).slot(condition, arm, s));
}

const Moments& PartialAggregate::slot(std::size_t condition, int arm, std::size_t s) const {
  if (condition >= shape_.conditions || arm < 1 || arm > shape_.arms || s >= shape_.slots_per_arm())
    throw ArgumentError("aggregate slot out of range");
  const auto per_arm = shape_.slots_per_arm();
  return slots_[(condition * static_cast<std::size_t>(shape_.arms) + static_cast<std::size_t>(arm - 1)) * per_arm + s];
}

PartialAggregate merge(const PartialAggregate& a, const PartialAggregate& b) {
  if (!(a.shape_ == b.shape_)) throw ArgumentError("cannot merge aggregates of different shape");
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.first_ < b.last_ && b.first_ < a.last_) throw ArgumentError("cannot merge overlapping trial ranges");
  PartialAggregate out(a.shape_, std::min(a.first_, b.first_), std::max(a.last_, b.last_));
  out.completed = a.completed + b.completed;
  out.truncated = a.truncated + b.truncated;
  for (std::size_t c = 0; c < out.condition_counts_.size(); ++c)
    out.condition_counts_[c] = a.condition_counts_[c] + b.condition_counts_[c];
  for (std::size_t i = 0; i < out.slots_.size(); ++i) {
    out.slots_[i] = a.slots_[i];
    out.slots_[i].merge(b.slots_[i]);
  }
  return out;
}

std::uint64_t trial_table_seed(std::uint64_t base_seed, std::int64_t rep) noexcept {
  return hashing::hash_words(hashing::Domain::trial_table, {base_seed, static_cast<std::uint64_t>(rep)});
}

std::uint64_t trial_randomness_seed(std::uint64_t base_seed, std::int64_t rep) noexcept {
  return hashing::hash_words(hashing::Domain::trial_randomness, {base_seed, static_cast<std::uint64_t>(rep)});
}

namespace {

AggregateShape shape_of(const ExperimentDesign& design, const EstimateOptions& options) {
  return {options.conditions.size(), static_cast<int>(design.arms.size()), options.functionals.size(),
          options.grid.size()};
}

void validate(const ExperimentDesign& design, const EstimateOptions& options) {
  if (design.arms.empty()) throw ConfigError("experiment needs at least one arm");
  if (options.reps < 1) throw ConfigError("reps must be positive");
  if (options.chunk_size < 1) throw ConfigError("chunk_size must be positive");
  if (options.threads < 1) throw ConfigError("threads must be positive");
  if (options.conditions.empty()) throw ConfigError("at least one condition is required");
  if (design.horizon_cap < 1) throw ConfigError("horizon_cap must be positive");
  const int arms = static_cast<int>(design.arms.size());
  for (const auto& c : options.conditions) {
    if ((c.kind == ConditionSpec::Kind::chosen || c.kind == ConditionSpec::Kind::not_chosen) &&
        (c.arm < 1 || c.arm > arms))
      throw ConfigError("condition " + c.label() + " refers to a missing arm");
  }
  if (const auto* rules = std::get_if<RuleSet>(&design.algorithm)) validate(*rules, arms);
}

}  // namespace

void accumulate(PartialAggregate& agg, const Trace& trace, const EstimateOptions& options) {
  if (trace.truncated) {
    ++agg.truncated;
    return;
  }
  ++agg.completed;
  const auto& shape = agg.shape();
  std::vector<std::size_t> hit;
  for (std::size_t c = 0; c < options.conditions.size(); ++c) {
    if (options.conditions[c].matches(trace)) {
      hit.push_back(c);
      ++agg.condition_count(c);
    }
  }
  if (hit.empty()) return;

  std::vector<double> values(shape.functionals);
  std::vector<double> curve(shape.grid);
  for (int k = 1; k <= shape.arms; ++k) {
    const auto& samples = trace.final_state.samples(k);
    if (samples.empty()) continue;
    for (std::size_t f = 0; f < shape.functionals; ++f) {
      const auto& spec = options.functionals[f];
      values[f] = samples.size() >= spec.min_samples() ? empirical_functional(trace, k, spec)
                                                       : std::numeric_limits<double>::quiet_NaN();
    }
    cdf_curve(samples, options.grid, curve);
    for (auto c : hit) {
      for (std::size_t f = 0; f < shape.functionals; ++f)
        if (!std::isnan(values[f])) agg.slot(c, k, f).add(values[f]);
      for (std::size_t g = 0; g < shape.grid; ++g) agg.slot(c, k, shape.functionals + g).add(curve[g]);
    }
  }
}

PartialAggregate aggregate_trials(const ExperimentDesign& design, const EstimateOptions& options, std::int64_t first,
                                  std::int64_t last) {
  PartialAggregate agg(shape_of(design, options), first, last);
  for (std::int64_t r = first; r < last; ++r) {
    const RewardTable table(trial_table_seed(options.base_seed, r), design.arms);
    const RandomnessSource w(trial_randomness_seed(options.base_seed, r));
    accumulate(agg, run_algorithm(table, w, design.algorithm, design.horizon_cap), options);
  }
  return agg;
}

bool CdfSummary::above_truth_within(double z) const {
  for (std::size_t i = 0; i < bias.size(); ++i)
    if (bias[i] < -z * se[i]) return false;
  return true;
}

bool CdfSummary::below_truth_within(double z) const {
  for (std::size_t i = 0; i < bias.size(); ++i)
    if (bias[i] > z * se[i]) return false;
  return true;
}

const StatisticSummary& ArmSummary::statistic(std::string_view name) const {
  for (const auto& s : statistics)
    if (s.name == name) return s;
  throw ArgumentError("no statistic named " + std::string(name));
}

const ArmSummary& ConditionSummary::arm(int k) const {
  for (const auto& a : arms)
    if (a.arm == k) return a;
  throw ArgumentError("no summary for arm " + std::to_string(k) + " under " + condition.label());
}

const ConditionSummary& BiasReport::condition(std::string_view label) const {
  for (const auto& c : conditions)
    if (c.condition.label() == label) return c;
  throw ArgumentError("no condition " + std::string(label) + " in report");
}

bool BiasReport::has_empty_condition() const {
  for (const auto& c : conditions)
    if (c.empty()) return true;
  return false;
}

BiasReport summarize(const PartialAggregate& agg, const ExperimentDesign& design, const EstimateOptions& options) {
  const auto& shape = agg.shape();
  if (!(shape == shape_of(design, options))) throw ArgumentError("aggregate does not match the experiment");
  BiasReport report;
  report.total_reps = agg.completed + agg.truncated;
  report.completed = agg.completed;
  report.truncated = agg.truncated;
  report.seed = options.base_seed;
  report.z = options.z;
  report.grid = options.grid;

  std::vector<std::vector<double>> truth_functional(design.arms.size());
  std::vector<std::vector<double>> truth_cdf(design.arms.size());
  for (std::size_t k = 0; k < design.arms.size(); ++k) {
    for (const auto& f : options.functionals) truth_functional[k].push_back(reference_value(design.arms[k], f));
    for (double y : options.grid.points()) truth_cdf[k].push_back(true_cdf(design.arms[k], y));
  }

  for (std::size_t c = 0; c < shape.conditions; ++c) {
    ConditionSummary cs;
    cs.condition = options.conditions[c];
    cs.n = agg.condition_count(c);
    cs.probability = agg.completed > 0 ? static_cast<double>(cs.n) / static_cast<double>(agg.completed) : 0.0;
    if (cs.n > 0) {
      for (int k = 1; k <= shape.arms; ++k) {
        ArmSummary as;
        as.arm = k;
        for (std::size_t f = 0; f < shape.functionals; ++f) {
          const auto& m = agg.slot(c, k, f);
          StatisticSummary s;
          s.name = options.functionals[f].name();
          s.n = m.n;
          s.reference = truth_functional[k - 1][f];
          if (m.n > 0) {
            s.estimate = m.mean();
            s.bias = s.estimate - s.reference;
            s.se = m.standard_error();
            s.verdict = sign_verdict(s.bias, s.se, options.z);
          } else {
            s.estimate = s.bias = std::numeric_limits<double>::quiet_NaN();
            s.se = std::numeric_limits<double>::infinity();
          }
          as.statistics.push_back(std::move(s));
        }
        auto& cdf = as.cdf;
        cdf.n = agg.slot(c, k, shape.functionals).n;
        for (std::size_t g = 0; g < shape.grid; ++g) {
          const auto& m = agg.slot(c, k, shape.functionals + g);
          const double truth = truth_cdf[k - 1][g];
          double est = m.n > 0 ? m.mean() : std::numeric_limits<double>::quiet_NaN();
          double se = m.standard_error();
          // An all-equal column carries no spread information; use the binomial SE of the truth.
          if (m.degenerate()) se = std::sqrt(truth * (1.0 - truth) / static_cast<double>(m.n));
          cdf.estimate.push_back(est);
          cdf.reference.push_back(truth);
          cdf.bias.push_back(est - truth);
          cdf.se.push_back(se);
        }
        for (std::size_t g = 1; g < shape.grid; ++g) {
          if (cdf.bias[g] < cdf.bias[cdf.argmin]) cdf.argmin = g;
          if (cdf.bias[g] > cdf.bias[cdf.argmax]) cdf.argmax = g;
        }
        cs.arms.push_back(std::move(as));
      }
    }
    report.conditions.push_back(std::move(cs));
  }
  return report;
}

BiasReport estimate(const ExperimentDesign& design, const EstimateOptions& options) {
  validate(design, options);
  const std::int64_t chunks = (options.reps + options.chunk_size - 1) / options.chunk_size;
  std::vector<std::optional<PartialAggregate>> parts(static_cast<std::size_t>(chunks));
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (std::int64_t i = next++; i < chunks; i = next++) {
      const std::int64_t first = i * options.chunk_size;
      const std::int64_t last = std::min(options.reps, first + options.chunk_size);
      parts[static_cast<std::size_t>(i)] = aggregate_trials(design, options, first, last);
    }
  };
  const int threads = static_cast<int>(std::min<std::int64_t>(options.threads, chunks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  PartialAggregate total(shape_of(design, options), 0, 0);
  for (auto& p : parts) total = merge(total, *p);
  return summarize(total, design, options);
}

namespace {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void row(std::ostream& out, const std::string& condition, int arm, const std::string& statistic, double estimate,
         double bias, double se, std::string_view verdict, std::int64_t n) {
  out << condition << ',' << arm << ',' << statistic << ',' << num(estimate) << ',' << num(bias) << ',' << num(se)
      << ',' << verdict << ',' << n << '\n';
}

}  // namespace

void write_csv(std::ostream& out, const BiasReport& report) {
  out << "condition,arm,statistic,estimate,bias,se,verdict,n\n";
  for (const auto& cs : report.conditions) {
    const auto name = cs.condition.label();
    if (cs.empty()) {
      out << name << ",,,,,,empty_condition,0\n";
      continue;
    }
    for (const auto& as : cs.arms) {
      for (const auto& s : as.statistics)
        row(out, name, as.arm, s.name, s.estimate, s.bias, s.se, label(s.verdict), s.n);
      const auto& cdf = as.cdf;
      if (cdf.bias.empty()) continue;
      auto point = [&](const std::string& stat, std::size_t g) {
        const auto v = std::isnan(cdf.bias[g]) ? Verdict::indeterminate : sign_verdict(cdf.bias[g], cdf.se[g], report.z);
        row(out, name, as.arm, stat, cdf.estimate[g], cdf.bias[g], cdf.se[g], label(v), cdf.n);
      };
      point("cdf_min", cdf.argmin);
      point("cdf_max", cdf.argmax);
      for (std::size_t g = 0; g < cdf.bias.size(); ++g) point("cdf@" + num(report.grid.points()[g]), g);
    }
  }
}

}  // namespace mabbias
