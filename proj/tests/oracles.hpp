#pragma once

// Reference computations that do not share code with the library.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// P(Z <= y) by integrating the density from far in the left tail.
inline double normal_cdf_by_integration(double y) { return simpson(normal_pdf, -40.0, y, 200000); }

inline double normal_cdf_erfc(double y) { return 0.5 * std::erfc(-y / std::sqrt(2.0)); }

// Quantile by bisection against the erfc CDF.
inline double normal_quantile_bisect(double u) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf_erfc(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
