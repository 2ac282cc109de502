#include "mabbias/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <string>

#include "mabbias/error.hpp"

namespace mabbias {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double apply_custom(const functional::CustomMonotone& c, double x) {
  if (x <= c.x.front()) return c.f.front();
  if (x >= c.x.back()) return c.f.back();
  const auto it = std::upper_bound(c.x.begin(), c.x.end(), x);
  const auto i = static_cast<std::size_t>(it - c.x.begin());
  const double w = (x - c.x[i - 1]) / (c.x[i] - c.x[i - 1]);
  return c.f[i - 1] + w * (c.f[i] - c.f[i - 1]);
}

// E f(X) for X ~ N(mu, s^2) by composite Simpson on mu +- 12 s; f is bounded here.
template <class F>
double normal_expectation(const NormalArm& n, F f) {
  const double s = std::sqrt(n.variance);
  constexpr int intervals = 4000;
  const double lo = -12.0;
  const double h = 24.0 / intervals;
  double acc = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double z = lo + h * i;
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * f(n.mean + s * z) * std::exp(-0.5 * z * z);
  }
  return acc * h / 3.0 / std::sqrt(2.0 * std::numbers::pi);
}

std::span<const double> arm_samples(const Trace& trace, int arm) {
  if (!trace.final_state.finalized()) throw ContractViolation("trace statistics need a finalized trial state");
  auto s = trace.final_state.samples(arm);
  if (s.empty()) throw ContractViolation("arm " + std::to_string(arm) + " has no samples at the stopping time");
  return s;
}

}  // namespace

FunctionalSpec FunctionalSpec::custom_monotone(std::vector<double> x, std::vector<double> f) {
  if (x.empty() || x.size() != f.size()) throw ArgumentError("custom_monotone: knots must be non-empty and paired");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i - 1] < x[i])) throw ArgumentError("custom_monotone: knots must be strictly ascending");
    if (f[i] < f[i - 1]) throw ArgumentError("custom_monotone: values must be non-decreasing");
  }
  return FunctionalSpec(functional::CustomMonotone{std::move(x), std::move(f)});
}

bool FunctionalSpec::monotone() const noexcept {
  return !std::holds_alternative<functional::Variance>(kind_) && !std::holds_alternative<functional::Median>(kind_);
}

std::size_t FunctionalSpec::min_samples() const noexcept {
  return std::holds_alternative<functional::Variance>(kind_) ? 2 : 1;
}

std::string FunctionalSpec::name() const {
  return std::visit(overloaded{
                        [](const functional::Mean&) { return std::string("mean"); },
                        [](const functional::IndicatorAt& i) {
                          char buf[48];
                          std::snprintf(buf, sizeof buf, "indicator@%.6g", i.y);
                          return std::string(buf);
                        },
                        [](const functional::Variance&) { return std::string("variance"); },
                        [](const functional::Median&) { return std::string("median"); },
                        [](const functional::CustomMonotone&) { return std::string("custom"); },
                    },
                    kind_);
}

CdfGrid::CdfGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) throw ArgumentError("CDF grid must not be empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) throw ArgumentError("CDF grid points must be finite");
    if (i > 0 && !(points_[i - 1] < points_[i])) throw ArgumentError("CDF grid must be strictly ascending");
  }
}

CdfGrid CdfGrid::equispaced(double lo, double hi, std::size_t n) {
  if (n == 0) throw ArgumentError("CDF grid needs at least one point");
  if (n == 1) return CdfGrid({lo});
  if (!(lo < hi)) throw ArgumentError("CDF grid needs lo < hi");
  std::vector<double> pts(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) pts[i] = lo + step * static_cast<double>(i);
  pts.back() = hi;
  return CdfGrid(std::move(pts));
}

double sample_mean(std::span<const double> samples) {
  if (samples.empty()) throw UndefinedStatistic("sample mean of an empty sample");
  return std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
}

double empirical_cdf(std::span<const double> sorted, double y) {
  if (sorted.empty()) throw UndefinedStatistic("empirical CDF of an empty sample");
  const auto le = std::upper_bound(sorted.begin(), sorted.end(), y) - sorted.begin();
  return static_cast<double>(le) / static_cast<double>(sorted.size());
}

double sample_variance(std::span<const double> samples) {
  if (samples.size() < 2) throw UndefinedStatistic("sample variance needs at least two samples");
  const double m = sample_mean(samples);
  double ss = 0.0;
  for (double x : samples) ss += (x - m) * (x - m);
  return ss / static_cast<double>(samples.size() - 1);
}

double sample_median(std::span<const double> sorted) {
  const auto n = sorted.size();
  if (n == 0) throw UndefinedStatistic("median of an empty sample");
  if (n % 2 == 1) return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double evaluate(const FunctionalSpec& f, std::span<const double> sorted) {
  return std::visit(overloaded{
                        [&](const functional::Mean&) { return sample_mean(sorted); },
                        [&](const functional::IndicatorAt& i) { return empirical_cdf(sorted, i.y); },
                        [&](const functional::Variance&) { return sample_variance(sorted); },
                        [&](const functional::Median&) { return sample_median(sorted); },
                        [&](const functional::CustomMonotone& c) {
                          if (sorted.empty()) throw UndefinedStatistic("functional of an empty sample");
                          double acc = 0.0;
                          for (double x : sorted) acc += apply_custom(c, x);
                          return acc / static_cast<double>(sorted.size());
                        },
                    },
                    f.kind());
}

void cdf_curve(std::span<const double> sorted, const CdfGrid& grid, std::span<double> out) {
  if (sorted.empty()) throw UndefinedStatistic("empirical CDF of an empty sample");
  if (out.size() != grid.size()) throw ArgumentError("cdf_curve: output size does not match the grid");
  const double n = static_cast<double>(sorted.size());
  std::size_t le = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double y = grid.points()[g];
    while (le < sorted.size() && sorted[le] <= y) ++le;
    out[g] = static_cast<double>(le) / n;
  }
}

double sample_mean(const Trace& trace, int arm) {
  return trace.final_state.sum(arm) / static_cast<double>(arm_samples(trace, arm).size());
}

double empirical_cdf(const Trace& trace, int arm, double y) { return empirical_cdf(arm_samples(trace, arm), y); }

double empirical_functional(const Trace& trace, int arm, const FunctionalSpec& f) {
  if (std::holds_alternative<functional::Mean>(f.kind())) return sample_mean(trace, arm);
  return evaluate(f, arm_samples(trace, arm));
}

std::vector<double> cdf_curve(const Trace& trace, int arm, const CdfGrid& grid) {
  std::vector<double> out(grid.size());
  cdf_curve(arm_samples(trace, arm), grid, out);
  return out;
}

double reference_value(const ArmSpec& arm, const FunctionalSpec& f) {
  return std::visit(
      overloaded{
          [&](const functional::Mean&) { return arm.mean(); },
          [&](const functional::IndicatorAt& i) { return true_cdf(arm, i.y); },
          [&](const functional::Variance&) { return arm.variance(); },
          [&](const functional::Median&) { return arm.median(); },
          [&](const functional::CustomMonotone& c) {
            if (const auto* n = std::get_if<NormalArm>(&arm.kind()))
              return normal_expectation(*n, [&](double x) { return apply_custom(c, x); });
            const auto d = std::holds_alternative<BernoulliArm>(arm.kind())
                               ? DiscreteArm{{0.0, 1.0}, {1.0 - std::get<BernoulliArm>(arm.kind()).p,
                                                          std::get<BernoulliArm>(arm.kind()).p}}
                               : std::get<DiscreteArm>(arm.kind());
            double acc = 0.0;
            for (std::size_t i = 0; i < d.support.size(); ++i) acc += d.probs[i] * apply_custom(c, d.support[i]);
            return acc;
          },
      },
      f.kind());
}

}  // namespace mabbias
