#include "mabbias/trial_state.hpp"

#include <algorithm>
#include <string>

#include "mabbias/error.hpp"

namespace mabbias {

TrialState::TrialState(int arms) {
  if (arms < 1) throw ArgumentError("trial state needs at least one arm");
  counts_.assign(static_cast<std::size_t>(arms), 0);
  sums_.assign(static_cast<std::size_t>(arms), 0.0);
  samples_.resize(static_cast<std::size_t>(arms));
}

std::size_t TrialState::slot(int arm) const {
  if (arm < 1 || arm > arm_count()) throw ArgumentError("arm index " + std::to_string(arm) + " out of range");
  return static_cast<std::size_t>(arm - 1);
}

void TrialState::record(int arm, double reward) {
  const auto k = slot(arm);
  if (finalized_) throw ContractViolation("record() on a finalized trial state");
  ++t_;
  ++counts_[k];
  sums_[k] += reward;
  samples_[k].push_back(reward);
  last_action_ = arm;
  last_reward_ = reward;
}

void TrialState::finalize() {
  if (finalized_) return;
  for (auto& s : samples_) std::sort(s.begin(), s.end());
  finalized_ = true;
}

std::int64_t TrialState::count(int arm) const { return counts_[slot(arm)]; }

double TrialState::sum(int arm) const { return sums_[slot(arm)]; }

double TrialState::mean(int arm) const {
  const auto k = slot(arm);
  if (counts_[k] == 0) throw ContractViolation("sample mean of arm " + std::to_string(arm) + " with no samples");
  return sums_[k] / static_cast<double>(counts_[k]);
}

std::span<const double> TrialState::samples(int arm) const { return samples_[slot(arm)]; }

}  // namespace mabbias
