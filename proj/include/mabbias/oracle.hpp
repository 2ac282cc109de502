#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mabbias/condition.hpp"
#include "mabbias/engine.hpp"
#include "mabbias/reward_table.hpp"

namespace mabbias {

/// A bandit problem small enough to enumerate every reward table: rows 1..horizon
/// of each arm's column range over that arm's finite support.
struct FiniteInstance {
  std::vector<std::vector<double>> supports;  // per arm, strictly ascending
  std::int64_t horizon = 3;                   // enumerated rows; also the horizon cap of rule runs
  Algorithm algorithm{HalvingSpec{}};
  std::optional<int> target_arm;  // every arm when empty
  ConditionSpec condition = ConditionSpec::marginal();
  std::vector<std::uint64_t> randomness_seeds{0};
  std::uint64_t max_tables = 10'000'000;
  int threads = 1;
  std::uint64_t table_seed = 0;  // source of cells outside the enumerated rows

  int arms() const noexcept { return static_cast<int>(supports.size()); }
  /// Number of distinct tables; throws SizeGuardError above max_tables.
  std::uint64_t table_count() const;
  std::vector<int> targets() const;
  void validate() const;
};

enum class Direction { increasing, decreasing };

enum class Property { condition_increasing, condition_decreasing, optimistic_sampling, lil_ucb_coupling, halving_coupling };

std::string_view label(Direction direction) noexcept;
std::string_view label(Property property) noexcept;
Property parse_property(std::string_view text);

struct CellChange {
  std::int64_t row = 1;
  int arm = 1;
  double before = 0.0;
  double after = 0.0;
};

struct Counterexample {
  std::vector<std::vector<double>> table;  // [arm-1][row-1], enumerated rows only
  std::vector<CellChange> changes;         // turns `table` into the perturbed table
  std::uint64_t randomness_seed = 0;
  std::string quantity;  // e.g. "1(C)/N_1(T)", "N_2(t)", "1(kappa=1)"
  int quantity_arm = 1;  // arm whose quantity violated the property
  std::string before;
  std::string after;
  std::int64_t time = 0;  // t for count trajectories, 0 for stopping-time quantities
  std::string detail;
};

struct MonotonicityReport {
  Property property = Property::condition_increasing;
  bool pass = true;
  std::uint64_t tables_checked = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t skipped_truncated = 0;
  std::uint64_t skipped_unsampled = 0;  // C held but N_k(T) = 0
  std::optional<Counterexample> counterexample;
};

/// 1(C)/N_k(T) moves in `direction` under every single-cell upward change of column k.
MonotonicityReport check_condition_monotonicity(const FiniteInstance& inst, Direction direction);
/// N_k(t) is non-decreasing in every cell of column k, for all t <= horizon.
MonotonicityReport check_optimistic_sampling(const FiniteInstance& inst);
/// For tables differing only in column k: N_k(t) <= N_k'(t) implies N_j(t) >= N_j'(t), j != k.
MonotonicityReport check_lil_ucb_coupling(const FiniteInstance& inst);
/// Sequential halving: N_k(t) <= N_k'(t) for all t and 1(kappa=k) <= 1(kappa'=k).
MonotonicityReport check_halving_coupling(const FiniteInstance& inst);

MonotonicityReport check(const FiniteInstance& inst, Property property);

/// Table `index` of the enumeration (mixed radix, column-major, arm 1 row 1 least significant).
RewardTable materialize(const FiniteInstance& inst, std::uint64_t index);
RewardTable materialize(const FiniteInstance& inst, const std::vector<std::vector<double>>& values);

struct ReplayResult {
  std::string before;
  std::string after;
  bool violated = false;
};

/// Re-runs the two trials of a counterexample from scratch.
ReplayResult replay(const FiniteInstance& inst, Property property, const Counterexample& cx);

}  // namespace mabbias
