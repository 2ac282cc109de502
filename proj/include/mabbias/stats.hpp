#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mabbias/arm.hpp"
#include "mabbias/engine.hpp"

namespace mabbias {

namespace functional {
struct Mean {
  bool operator==(const Mean&) const = default;
};
struct IndicatorAt {  // x -> 1(x <= y)
  double y = 0.0;
  bool operator==(const IndicatorAt&) const = default;
};
struct Variance {  // unbiased, n - 1 denominator
  bool operator==(const Variance&) const = default;
};
struct Median {  // mean of the two middle order statistics for even n
  bool operator==(const Median&) const = default;
};
// Piecewise-linear non-decreasing f through (x_i, f_i), constant outside the knots.
struct CustomMonotone {
  std::vector<double> x;
  std::vector<double> f;
  bool operator==(const CustomMonotone&) const = default;
};
}  // namespace functional

class FunctionalSpec {
 public:
  using Kind = std::variant<functional::Mean, functional::IndicatorAt, functional::Variance, functional::Median,
                            functional::CustomMonotone>;

  static FunctionalSpec mean() { return FunctionalSpec(functional::Mean{}); }
  static FunctionalSpec indicator_at(double y) { return FunctionalSpec(functional::IndicatorAt{y}); }
  static FunctionalSpec variance() { return FunctionalSpec(functional::Variance{}); }
  static FunctionalSpec median() { return FunctionalSpec(functional::Median{}); }
  static FunctionalSpec custom_monotone(std::vector<double> x, std::vector<double> f);

  const Kind& kind() const noexcept { return kind_; }
  /// True for expectations of non-decreasing functions (mean, indicators, custom).
  bool monotone() const noexcept;
  /// Minimum samples for the statistic to be defined.
  std::size_t min_samples() const noexcept;
  /// Short identifier used in reports: mean, variance, median, indicator@y, custom.
  std::string name() const;

  bool operator==(const FunctionalSpec&) const = default;

 private:
  explicit FunctionalSpec(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Strictly ascending finite evaluation points for CDF curves.
class CdfGrid {
 public:
  explicit CdfGrid(std::vector<double> points);
  static CdfGrid equispaced(double lo, double hi, std::size_t n);
  /// 161 points on [-4, 4].
  static CdfGrid standard() { return equispaced(-4.0, 4.0, 161); }

  const std::vector<double>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool operator==(const CdfGrid&) const = default;

 private:
  std::vector<double> points_;
};

// Sample-level statistics. Spans must be sorted ascending where noted.
double sample_mean(std::span<const double> samples);
double empirical_cdf(std::span<const double> sorted, double y);
double sample_variance(std::span<const double> samples);
double sample_median(std::span<const double> sorted);
double evaluate(const FunctionalSpec& f, std::span<const double> sorted);
void cdf_curve(std::span<const double> sorted, const CdfGrid& grid, std::span<double> out);

// Trace-level views over arm k's samples at the stopping time.
double sample_mean(const Trace& trace, int arm);
double empirical_cdf(const Trace& trace, int arm, double y);
double empirical_functional(const Trace& trace, int arm, const FunctionalSpec& f);
std::vector<double> cdf_curve(const Trace& trace, int arm, const CdfGrid& grid);

/// Population value of the functional under the arm's law (E_k f, sigma^2, median).
double reference_value(const ArmSpec& arm, const FunctionalSpec& f);

}  // namespace mabbias
