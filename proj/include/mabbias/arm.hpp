#pragma once

#include <variant>
#include <vector>

namespace mabbias {

struct NormalArm {
  double mean = 0.0;
  double variance = 1.0;
  bool operator==(const NormalArm&) const = default;
};

struct BernoulliArm {
  double p = 0.5;
  bool operator==(const BernoulliArm&) const = default;
};

struct DiscreteArm {
  std::vector<double> support;  // strictly ascending
  std::vector<double> probs;
  bool operator==(const DiscreteArm&) const = default;
};

/// Reward distribution of one arm. Construct through the validating factories.
class ArmSpec {
 public:
  using Kind = std::variant<NormalArm, BernoulliArm, DiscreteArm>;

  static ArmSpec normal(double mean, double variance);
  static ArmSpec bernoulli(double p);
  static ArmSpec discrete(std::vector<double> support, std::vector<double> probs);
  /// Equal-probability law over `support`; used for finite enumeration.
  static ArmSpec uniform_over(std::vector<double> support);

  const Kind& kind() const noexcept { return kind_; }
  bool is_continuous() const noexcept { return std::holds_alternative<NormalArm>(kind_); }

  double mean() const;
  double variance() const;
  /// Smallest m with F(m) >= 1/2; the mean for normal arms.
  double median() const;

  bool operator==(const ArmSpec&) const = default;

 private:
  explicit ArmSpec(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

double standard_normal_cdf(double z);
/// Quantile of N(0,1) for u in (0,1).
double standard_normal_quantile(double u);

/// F_k(y) = P(X <= y).
double true_cdf(const ArmSpec& arm, double y);
/// Generalized inverse inf{x : F(x) >= u}; u must lie in (0,1).
double inverse_cdf(const ArmSpec& arm, double u);

}  // namespace mabbias
