#pragma once

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "mabbias/reward_table.hpp"
#include "mabbias/trial_state.hpp"

namespace mabbias {

namespace sampling {
struct AlternateTwoArms {  // arm 1 at odd t, arm 2 at even t
  bool operator==(const AlternateTwoArms&) const = default;
};
struct SingleArm {
  bool operator==(const SingleArm&) const = default;
};
struct RoundRobin {
  int arms = 2;
  bool operator==(const RoundRobin&) const = default;
};
struct LilUcb {
  double beta = 0.5;
  double epsilon = 0.1;
  double delta = 0.2;
  double sigma2 = 1.0;
  bool operator==(const LilUcb&) const = default;
};
// Pulls the arm with the lowest sample mean after one forced round. Not a real
// bandit policy: it is the anti-optimistic reference the oracle must reject.
struct LowestMean {
  bool operator==(const LowestMean&) const = default;
};
}  // namespace sampling

using SamplingRule =
    std::variant<sampling::AlternateTwoArms, sampling::SingleArm, sampling::RoundRobin, sampling::LilUcb,
                 sampling::LowestMean>;

struct StoppingRule;

namespace stopping {
struct FixedTime {
  std::int64_t max_time = 1;
  bool operator==(const FixedTime&) const = default;
};
// Single-arm test: stop when mu_hat(t) >= z_alpha / sqrt(t), checked for t >= min_time.
struct UpperBoundary {
  double alpha = 0.2;
  std::int64_t min_time = 1;
  bool operator==(const UpperBoundary&) const = default;
};
// Two-arm test on mu_hat_1 - mu_hat_2 against +-z_{alpha/2} sqrt(2/t), even t only.
struct TwoSidedEven {
  double alpha = 0.2;
  bool operator==(const TwoSidedEven&) const = default;
};
// lil'UCB rule: some N_k >= 1 + lambda * sum_{j != k} N_j, once every arm has a sample.
struct CountDominance {
  double lambda = 1.0;
  bool operator==(const CountDominance&) const = default;
};
struct MinOf {
  std::vector<StoppingRule> rules;  // earlier entries win ties
  bool operator==(const MinOf&) const;
};
}  // namespace stopping

struct StoppingRule {
  using Kind = std::variant<stopping::FixedTime, stopping::UpperBoundary, stopping::TwoSidedEven,
                            stopping::CountDominance, stopping::MinOf>;
  Kind kind;

  StoppingRule(stopping::FixedTime r) : kind(r) {}
  StoppingRule(stopping::UpperBoundary r) : kind(r) {}
  StoppingRule(stopping::TwoSidedEven r) : kind(r) {}
  StoppingRule(stopping::CountDominance r) : kind(r) {}
  StoppingRule(stopping::MinOf r) : kind(std::move(r)) {}

  bool operator==(const StoppingRule&) const = default;
};

namespace choosing {
struct ArgmaxMean {
  bool operator==(const ArgmaxMean&) const = default;
};
struct ArgmaxCount {
  bool operator==(const ArgmaxCount&) const = default;
};
struct Fixed {
  int arm = 1;
  bool operator==(const Fixed&) const = default;
};
// Deliberately pessimistic choice; exists so the oracle has a known violation.
struct ArgminMean {
  bool operator==(const ArgminMean&) const = default;
};
}  // namespace choosing

using ChoosingRule = std::variant<choosing::ArgmaxMean, choosing::ArgmaxCount, choosing::Fixed, choosing::ArgminMean>;

struct RuleSet {
  SamplingRule sampling;
  StoppingRule stopping;
  ChoosingRule choosing;
  bool operator==(const RuleSet&) const = default;
};

enum class StopReason { none, max_time, upper_cross, lower_cross, count_dominance, halving_complete, truncated };

std::string_view label(StopReason reason) noexcept;

struct StopDecision {
  bool stop = false;
  StopReason reason = StopReason::none;
};

/// z_alpha / sqrt(t), the one-sided pointwise upper confidence bound.
double pointwise_upper_boundary(std::int64_t t, double alpha);
/// z_{alpha/2} sqrt(2/t) for even t; the lower boundary is its negation.
double two_arm_boundary(std::int64_t t, double alpha);
/// lil'UCB exploration bonus for an arm with n samples; +infinity where the
/// iterated logarithm is not positive.
double lil_ucb_bonus(std::int64_t n, const sampling::LilUcb& params);

/// Arm to pull at time state.time() + 1.
int next_arm(const SamplingRule& rule, const TrialState& state, const RandomnessSource& w);
StopDecision should_stop(const StoppingRule& rule, const TrialState& state);
int choose(const ChoosingRule& rule, const TrialState& state);

/// Throws ArgumentError when a rule's parameters or arm references do not fit K arms.
void validate(const RuleSet& rules, int arms);

}  // namespace mabbias
