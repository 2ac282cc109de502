#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mabbias {

/// Running counts N_k(t), sums S_k(t) and per-arm samples of one trial.
/// Arms are 1-based. Samples are kept in pull order while the trial runs and
/// sorted ascending by finalize().
class TrialState {
 public:
  explicit TrialState(int arms);

  void record(int arm, double reward);
  void finalize();

  std::int64_t time() const noexcept { return t_; }
  int arm_count() const noexcept { return static_cast<int>(counts_.size()); }
  std::int64_t count(int arm) const;
  double sum(int arm) const;
  /// S_k/N_k; throws ContractViolation when N_k = 0.
  double mean(int arm) const;
  std::span<const double> samples(int arm) const;
  std::span<const std::int64_t> counts() const noexcept { return counts_; }
  bool finalized() const noexcept { return finalized_; }

  int last_action() const noexcept { return last_action_; }
  double last_reward() const noexcept { return last_reward_; }

 private:
  std::size_t slot(int arm) const;

  std::int64_t t_ = 0;
  std::vector<std::int64_t> counts_;
  std::vector<double> sums_;
  std::vector<std::vector<double>> samples_;
  int last_action_ = 0;
  double last_reward_ = 0.0;
  bool finalized_ = false;
};

}  // namespace mabbias
