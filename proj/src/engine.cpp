#include "mabbias/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

#include "mabbias/error.hpp"

namespace mabbias {

std::vector<std::int64_t> Trace::counts_at(std::int64_t t) const {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(final_state.arm_count()), 0);
  const auto upto = std::clamp<std::int64_t>(t, 0, static_cast<std::int64_t>(actions.size()));
  for (std::int64_t s = 0; s < upto; ++s) ++counts[static_cast<std::size_t>(actions[static_cast<std::size_t>(s)] - 1)];
  return counts;
}

Trace run_trial(const RewardTable& table, const RandomnessSource& w, const RuleSet& rules, std::int64_t horizon_cap) {
  if (horizon_cap < 1) throw ArgumentError("run_trial: horizon_cap must be >= 1");
  const int arms = table.arm_count();
  validate(rules, arms);

  Trace trace;
  trace.final_state = TrialState(arms);
  trace.table_seed = table.seed();
  trace.randomness_seed = w.seed();
  trace.horizon_cap = horizon_cap;
  auto& state = trace.final_state;

  for (;;) {
    const int arm = next_arm(rules.sampling, state, w);
    const double reward = table.cell(state.count(arm) + 1, arm);
    state.record(arm, reward);
    trace.actions.push_back(arm);
    trace.rewards.push_back(reward);

    const auto decision = should_stop(rules.stopping, state);
    if (decision.stop) {
      trace.stop_reason = decision.reason;
      break;
    }
    if (state.time() >= horizon_cap) {
      trace.truncated = true;
      trace.stop_reason = StopReason::truncated;
      break;
    }
  }
  trace.stop_time = state.time();
  state.finalize();
  trace.kappa = choose(rules.choosing, state);
  return trace;
}

int halving_rounds(int arms) {
  if (arms < 1) throw ArgumentError("halving_rounds: need at least one arm");
  int rounds = 0;
  while ((1LL << rounds) < arms) ++rounds;
  return rounds;
}

std::int64_t halving_round_budget(std::int64_t budget, int active, int arms) {
  if (active < 1) throw ArgumentError("halving_round_budget: active_count must be >= 1");
  const int rounds = halving_rounds(arms);
  if (rounds == 0) throw ConfigError("sequential halving needs at least two arms");
  return budget / (static_cast<std::int64_t>(active) * rounds);
}

std::int64_t halving_max_pulls_per_arm(std::int64_t budget, int arms) {
  std::int64_t total = 0;
  int active = arms;
  for (int r = 0; r < halving_rounds(arms); ++r) {
    total += halving_round_budget(budget, active, arms);
    active = (active + 1) / 2;
  }
  return total;
}

Trace run_sequential_halving(const RewardTable& table, std::int64_t budget) {
  const int arms = table.arm_count();
  if (arms < 2) throw ConfigError("sequential halving needs at least two arms");

  Trace trace;
  trace.final_state = TrialState(arms);
  trace.table_seed = table.seed();
  trace.halving_budget = budget;
  auto& state = trace.final_state;

  std::vector<int> active(static_cast<std::size_t>(arms));
  std::iota(active.begin(), active.end(), 1);
  const int rounds = halving_rounds(arms);

  for (int r = 1; r <= rounds; ++r) {
    const auto m = halving_round_budget(budget, static_cast<int>(active.size()), arms);
    if (m == 0)
      throw ConfigError("sequential halving: budget " + std::to_string(budget) + " gives m_" + std::to_string(r) +
                        " = 0");
    std::vector<std::pair<double, int>> round_means;
    for (int k : active) {
      double round_sum = 0.0;
      for (std::int64_t j = 0; j < m; ++j) {
        const double reward = table.cell(state.count(k) + 1, k);
        state.record(k, reward);
        trace.actions.push_back(k);
        trace.rewards.push_back(reward);
        round_sum += reward;
      }
      round_means.emplace_back(round_sum / static_cast<double>(m), k);
    }
    // Largest round mean first, lowest index among ties.
    std::stable_sort(round_means.begin(), round_means.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    round_means.resize((round_means.size() + 1) / 2);
    active.clear();
    for (const auto& [mean, k] : round_means) active.push_back(k);
    std::sort(active.begin(), active.end());
  }

  trace.stop_time = state.time();
  trace.horizon_cap = state.time();
  trace.stop_reason = StopReason::halving_complete;
  trace.kappa = active.front();
  state.finalize();
  return trace;
}

Trace run_algorithm(const RewardTable& table, const RandomnessSource& w, const Algorithm& algorithm,
                    std::int64_t horizon_cap) {
  if (const auto* rules = std::get_if<RuleSet>(&algorithm)) return run_trial(table, w, *rules, horizon_cap);
  auto trace = run_sequential_halving(table, std::get<HalvingSpec>(algorithm).budget);
  trace.randomness_seed = w.seed();
  return trace;
}

void write_trace_csv(std::ostream& out, const Trace& trace, bool header) {
  const int arms = trace.final_state.arm_count();
  if (header) {
    out << "t,A_t,Y_t";
    for (int k = 1; k <= arms; ++k) out << ",N_" << k;
    out << '\n';
  }
  std::vector<std::int64_t> counts(static_cast<std::size_t>(arms), 0);
  char buf[64];
  for (std::size_t s = 0; s < trace.actions.size(); ++s) {
    ++counts[static_cast<std::size_t>(trace.actions[s] - 1)];
    std::snprintf(buf, sizeof buf, "%.17g", trace.rewards[s]);
    out << (s + 1) << ',' << trace.actions[s] << ',' << buf;
    for (auto n : counts) out << ',' << n;
    out << '\n';
  }
}

}  // namespace mabbias
