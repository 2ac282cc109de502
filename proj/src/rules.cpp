#include "mabbias/rules.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mabbias/arm.hpp"
#include "mabbias/error.hpp"

namespace mabbias {

namespace stopping {
bool MinOf::operator==(const MinOf& other) const { return rules == other.rules; }
}  // namespace stopping

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("alpha must lie in (0,1)");
}

bool all_sampled(const TrialState& state) {
  for (auto n : state.counts())
    if (n == 0) return false;
  return true;
}

// First index maximizing score(k); ties go to the lowest index.
template <class Score>
int argmax_arm(int arms, Score score) {
  int best = 1;
  double best_score = score(1);
  for (int k = 2; k <= arms; ++k) {
    const double s = score(k);
    if (s > best_score) {
      best = k;
      best_score = s;
    }
  }
  return best;
}

void require_all_sampled(const TrialState& state, const char* rule) {
  if (!all_sampled(state))
    throw ContractViolation(std::string(rule) + " choosing rule needs N_k >= 1 for every arm");
}

void validate_stopping(const StoppingRule& rule, int arms) {
  std::visit(overloaded{
                 [](const stopping::FixedTime& r) {
                   if (r.max_time < 1) throw ArgumentError("fixed_time: M must be >= 1");
                 },
                 [](const stopping::UpperBoundary& r) {
                   check_alpha(r.alpha);
                   if (r.min_time < 1) throw ArgumentError("upper_boundary: min_time must be >= 1");
                 },
                 [arms](const stopping::TwoSidedEven& r) {
                   check_alpha(r.alpha);
                   if (arms < 2) throw ArgumentError("two_sided_even needs two arms");
                 },
                 [](const stopping::CountDominance& r) {
                   if (!(r.lambda > 0.0)) throw ArgumentError("lil_ucb_count: lambda must be positive");
                 },
                 [arms](const stopping::MinOf& r) {
                   if (r.rules.empty()) throw ArgumentError("min_of needs at least one rule");
                   for (const auto& sub : r.rules) validate_stopping(sub, arms);
                 },
             },
             rule.kind);
}

}  // namespace

std::string_view label(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::none: return "none";
    case StopReason::max_time: return "max_time";
    case StopReason::upper_cross: return "upper_cross";
    case StopReason::lower_cross: return "lower_cross";
    case StopReason::count_dominance: return "count_dominance";
    case StopReason::halving_complete: return "halving_complete";
    case StopReason::truncated: return "truncated";
  }
  return "unknown";
}

double pointwise_upper_boundary(std::int64_t t, double alpha) {
  if (t < 1) throw ArgumentError("pointwise_upper_boundary: t must be >= 1");
  check_alpha(alpha);
  return standard_normal_quantile(1.0 - alpha) / std::sqrt(static_cast<double>(t));
}

double two_arm_boundary(std::int64_t t, double alpha) {
  if (t < 2 || t % 2 != 0) throw ArgumentError("two_arm_boundary: t must be even and >= 2");
  check_alpha(alpha);
  return standard_normal_quantile(1.0 - alpha / 2.0) * std::sqrt(2.0 / static_cast<double>(t));
}

double lil_ucb_bonus(std::int64_t n, const sampling::LilUcb& p) {
  if (n < 1) throw ArgumentError("lil_ucb_bonus: n must be >= 1");
  const double nn = static_cast<double>(n);
  const double inner = std::log((1.0 + p.epsilon) * nn) / p.delta;
  if (!(inner > 0.0)) return std::numeric_limits<double>::infinity();
  const double loglog = std::log(inner);
  if (!(loglog > 0.0)) return std::numeric_limits<double>::infinity();
  return (1.0 + p.beta) * (1.0 + std::sqrt(p.epsilon)) * std::sqrt(2.0 * p.sigma2 * (1.0 + p.epsilon) * loglog / nn);
}

int next_arm(const SamplingRule& rule, const TrialState& state, const RandomnessSource& /*w*/) {
  const std::int64_t t = state.time() + 1;
  const int arms = state.arm_count();
  return std::visit(
      overloaded{
          [t](const sampling::AlternateTwoArms&) { return t % 2 == 1 ? 1 : 2; },
          [](const sampling::SingleArm&) { return 1; },
          [t](const sampling::RoundRobin& r) { return static_cast<int>((t - 1) % r.arms) + 1; },
          [&](const sampling::LilUcb& p) {
            if (t <= arms) return static_cast<int>(t);
            return argmax_arm(arms, [&](int k) { return state.mean(k) + lil_ucb_bonus(state.count(k), p); });
          },
          [&](const sampling::LowestMean&) {
            if (t <= arms) return static_cast<int>(t);
            return argmax_arm(arms, [&](int k) { return -state.mean(k); });
          },
      },
      rule);
}

StopDecision should_stop(const StoppingRule& rule, const TrialState& state) {
  const std::int64_t t = state.time();
  return std::visit(
      overloaded{
          [t](const stopping::FixedTime& r) {
            return t >= r.max_time ? StopDecision{true, StopReason::max_time} : StopDecision{};
          },
          [&](const stopping::UpperBoundary& r) {
            if (t < r.min_time || state.count(1) == 0) return StopDecision{};
            return state.mean(1) >= pointwise_upper_boundary(t, r.alpha) ? StopDecision{true, StopReason::upper_cross}
                                                                         : StopDecision{};
          },
          [&](const stopping::TwoSidedEven& r) {
            if (t < 2 || t % 2 != 0 || state.count(1) == 0 || state.count(2) == 0) return StopDecision{};
            const double diff = state.mean(1) - state.mean(2);
            const double u = two_arm_boundary(t, r.alpha);
            if (diff >= u) return StopDecision{true, StopReason::upper_cross};
            if (diff <= -u) return StopDecision{true, StopReason::lower_cross};
            return StopDecision{};
          },
          [&](const stopping::CountDominance& r) {
            if (!all_sampled(state)) return StopDecision{};
            for (auto n : state.counts()) {
              const auto others = static_cast<double>(t - n);
              if (static_cast<double>(n) >= 1.0 + r.lambda * others)
                return StopDecision{true, StopReason::count_dominance};
            }
            return StopDecision{};
          },
          [&](const stopping::MinOf& r) {
            for (const auto& sub : r.rules) {
              auto d = should_stop(sub, state);
              if (d.stop) return d;
            }
            return StopDecision{};
          },
      },
      rule.kind);
}

int choose(const ChoosingRule& rule, const TrialState& state) {
  const int arms = state.arm_count();
  return std::visit(overloaded{
                        [&](const choosing::ArgmaxMean&) {
                          require_all_sampled(state, "argmax_mean");
                          return argmax_arm(arms, [&](int k) { return state.mean(k); });
                        },
                        [&](const choosing::ArgmaxCount&) {
                          return argmax_arm(arms, [&](int k) { return static_cast<double>(state.count(k)); });
                        },
                        [](const choosing::Fixed& f) { return f.arm; },
                        [&](const choosing::ArgminMean&) {
                          require_all_sampled(state, "argmin_mean");
                          return argmax_arm(arms, [&](int k) { return -state.mean(k); });
                        },
                    },
                    rule);
}

void validate(const RuleSet& rules, int arms) {
  if (arms < 1) throw ArgumentError("rule set needs at least one arm");
  std::visit(overloaded{
                 [arms](const sampling::AlternateTwoArms&) {
                   if (arms != 2) throw ArgumentError("alternate_two_arms needs exactly two arms");
                 },
                 [](const sampling::SingleArm&) {},
                 [arms](const sampling::RoundRobin& r) {
                   if (r.arms != arms) throw ArgumentError("round_robin: K does not match the arm count");
                 },
                 [](const sampling::LilUcb& p) {
                   if (!(p.beta > 0.0) || !(p.epsilon > 0.0) || !(p.sigma2 > 0.0))
                     throw ArgumentError("lil_ucb: beta, epsilon and sigma2 must be positive");
                   if (!(p.delta > 0.0 && p.delta < 1.0)) throw ArgumentError("lil_ucb: delta must lie in (0,1)");
                 },
                 [](const sampling::LowestMean&) {},
             },
             rules.sampling);
  validate_stopping(rules.stopping, arms);
  if (const auto* f = std::get_if<choosing::Fixed>(&rules.choosing))
    if (f->arm < 1 || f->arm > arms) throw ArgumentError("fixed choosing rule references a missing arm");
}

}  // namespace mabbias
