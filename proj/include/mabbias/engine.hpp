#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "mabbias/reward_table.hpp"
#include "mabbias/rules.hpp"
#include "mabbias/trial_state.hpp"

namespace mabbias {

/// Fixed-budget sequential halving over all arms of the table.
struct HalvingSpec {
  std::int64_t budget = 0;
  bool operator==(const HalvingSpec&) const = default;
};

using Algorithm = std::variant<RuleSet, HalvingSpec>;

/// One completed run. `actions[t-1]` and `rewards[t-1]` are A_t and Y_t.
struct Trace {
  std::int64_t stop_time = 0;
  bool truncated = false;
  StopReason stop_reason = StopReason::none;
  int kappa = 0;
  TrialState final_state{1};  // finalized: per-arm samples sorted
  std::vector<int> actions;
  std::vector<double> rewards;

  std::uint64_t table_seed = 0;
  std::uint64_t randomness_seed = 0;
  std::int64_t horizon_cap = 0;
  std::optional<std::int64_t> halving_budget;

  /// N_k(t) for every arm, read off the pull sequence (t clipped to stop_time).
  std::vector<std::int64_t> counts_at(std::int64_t t) const;
};

/// Sampling -> reward -> stop check, repeated until the stopping rule fires or
/// horizon_cap pulls were made (then `truncated` is set).
Trace run_trial(const RewardTable& table, const RandomnessSource& w, const RuleSet& rules, std::int64_t horizon_cap);

/// m_r = floor(T / (|A_r| * ceil(log2 K))).
std::int64_t halving_round_budget(std::int64_t budget, int active, int arms);
/// ceil(log2 K) for K >= 1.
int halving_rounds(int arms);
/// Largest number of pulls any single arm can receive under the schedule.
std::int64_t halving_max_pulls_per_arm(std::int64_t budget, int arms);

Trace run_sequential_halving(const RewardTable& table, std::int64_t budget);

Trace run_algorithm(const RewardTable& table, const RandomnessSource& w, const Algorithm& algorithm,
                    std::int64_t horizon_cap);

/// Debug dump: header `t,A_t,Y_t,N_1..N_K`, one row per pull.
void write_trace_csv(std::ostream& out, const Trace& trace, bool header = true);

}  // namespace mabbias
