#include "mabbias/arm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "mabbias/error.hpp"

namespace mabbias {
namespace {

DiscreteArm as_discrete(const BernoulliArm& b) { return DiscreteArm{{0.0, 1.0}, {1.0 - b.p, b.p}}; }

template <class F>
decltype(auto) visit_discrete(const ArmSpec::Kind& kind, F&& f) {
  if (const auto* b = std::get_if<BernoulliArm>(&kind)) return f(as_discrete(*b));
  return f(std::get<DiscreteArm>(kind));
}

double discrete_cdf(const DiscreteArm& d, double y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < d.support.size() && d.support[i] <= y; ++i) acc += d.probs[i];
  return std::min(acc, 1.0);
}

double discrete_quantile(const DiscreteArm& d, double u) {
  double acc = 0.0;
  for (std::size_t i = 0; i < d.support.size(); ++i) {
    acc += d.probs[i];
    if (acc >= u) return d.support[i];
  }
  return d.support.back();  // rounding left the cumulative sum just below u
}

}  // namespace

ArmSpec ArmSpec::normal(double mean, double variance) {
  if (!std::isfinite(mean)) throw ArgumentError("normal arm: mean must be finite");
  if (!(variance > 0.0) || !std::isfinite(variance))
    throw ArgumentError("normal arm: variance must be positive");
  return ArmSpec(NormalArm{mean, variance});
}

ArmSpec ArmSpec::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("bernoulli arm: p must lie in [0,1]");
  return ArmSpec(BernoulliArm{p});
}

ArmSpec ArmSpec::discrete(std::vector<double> support, std::vector<double> probs) {
  if (support.empty() || support.size() != probs.size())
    throw ArgumentError("discrete arm: support and probs must be non-empty and of equal length");
  for (std::size_t i = 1; i < support.size(); ++i)
    if (!(support[i - 1] < support[i]))
      throw ArgumentError("discrete arm: support must be strictly ascending");
  for (double p : probs)
    if (!(p >= 0.0)) throw ArgumentError("discrete arm: probabilities must be nonnegative");
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12)
    throw ArgumentError("discrete arm: probabilities sum to " + std::to_string(total));
  return ArmSpec(DiscreteArm{std::move(support), std::move(probs)});
}

ArmSpec ArmSpec::uniform_over(std::vector<double> support) {
  const auto n = support.size();
  std::vector<double> probs(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
  if (n > 0) probs.back() = 1.0 - (static_cast<double>(n) - 1.0) * probs.front();
  return discrete(std::move(support), std::move(probs));
}

double ArmSpec::mean() const {
  if (const auto* n = std::get_if<NormalArm>(&kind_)) return n->mean;
  return visit_discrete(kind_, [](const DiscreteArm& d) {
    return std::inner_product(d.support.begin(), d.support.end(), d.probs.begin(), 0.0);
  });
}

double ArmSpec::variance() const {
  if (const auto* n = std::get_if<NormalArm>(&kind_)) return n->variance;
  const double mu = mean();
  return visit_discrete(kind_, [mu](const DiscreteArm& d) {
    double v = 0.0;
    for (std::size_t i = 0; i < d.support.size(); ++i) v += d.probs[i] * (d.support[i] - mu) * (d.support[i] - mu);
    return v;
  });
}

double ArmSpec::median() const {
  if (const auto* n = std::get_if<NormalArm>(&kind_)) return n->mean;
  return visit_discrete(kind_, [](const DiscreteArm& d) { return discrete_quantile(d, 0.5); });
}

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Acklam's rational approximation (relative error ~1e-9) followed by one
// Halley step against erfc, which brings the result to near machine precision.
double standard_normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw ArgumentError("normal quantile: u must lie in (0,1)");

  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (u < p_low) {
    const double q = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (u <= 1.0 - p_low) {
    const double q = u - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-u));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  const double e = standard_normal_cdf(x) - u;
  const double step = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - step / (1.0 + 0.5 * x * step);
}

double true_cdf(const ArmSpec& arm, double y) {
  if (const auto* n = std::get_if<NormalArm>(&arm.kind()))
    return standard_normal_cdf((y - n->mean) / std::sqrt(n->variance));
  return visit_discrete(arm.kind(), [y](const DiscreteArm& d) { return discrete_cdf(d, y); });
}

double inverse_cdf(const ArmSpec& arm, double u) {
  if (!(u > 0.0 && u < 1.0)) throw ArgumentError("inverse_cdf: u must lie in (0,1)");
  if (const auto* n = std::get_if<NormalArm>(&arm.kind()))
    return n->mean + std::sqrt(n->variance) * standard_normal_quantile(u);
  return visit_discrete(arm.kind(), [u](const DiscreteArm& d) { return discrete_quantile(d, u); });
}

}  // namespace mabbias
