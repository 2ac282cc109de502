#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "mabbias/arm.hpp"

namespace mabbias {

namespace hashing {

// Domain tags keep reward cells, external randomness and per-trial seeds in
// disjoint hash streams.
enum class Domain : std::uint64_t {
  reward_cell = 0x52455741524443ULL,
  external = 0x45585452414eULL,
  trial_table = 0x545441424c45ULL,
  trial_randomness = 0x5452414e44ULL,
};

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Order-sensitive hash of a word sequence under a domain tag.
std::uint64_t hash_words(Domain domain, std::initializer_list<std::uint64_t> words) noexcept;

/// Maps 64 random bits to the open interval (0,1): midpoints of a 2^-52 lattice,
/// all exactly representable, so the result is never 0 or 1.
constexpr double to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

}  // namespace hashing

struct CellIndex {
  std::int64_t row = 1;  // 1-based pull index within the arm's stack
  int arm = 1;           // 1-based arm index
  auto operator<=>(const CellIndex&) const = default;
};

/// Lazily generated N x K table of independent rewards. Cell (i,k) is a pure
/// function of (seed, i, k, arms[k]) unless explicitly overridden.
class RewardTable {
 public:
  RewardTable(std::uint64_t seed, std::vector<ArmSpec> arms);

  double cell(std::int64_t row, int arm) const;
  /// Copy with exactly one cell replaced; *this is unchanged.
  RewardTable with_cell_overridden(std::int64_t row, int arm, double value) const;
  /// Copy with many cells replaced at once.
  RewardTable with_cells_overridden(std::vector<std::pair<CellIndex, double>> cells) const;

  std::uint64_t seed() const noexcept { return seed_; }
  int arm_count() const noexcept { return static_cast<int>(arms_->size()); }
  const std::vector<ArmSpec>& arms() const noexcept { return *arms_; }
  const ArmSpec& arm(int k) const;
  std::span<const std::pair<CellIndex, double>> overrides() const noexcept { return overrides_; }

 private:
  void check_index(std::int64_t row, int arm) const;

  std::uint64_t seed_;
  std::shared_ptr<const std::vector<ArmSpec>> arms_;
  std::vector<std::pair<CellIndex, double>> overrides_;  // sorted by CellIndex
};

/// External randomness W_t of randomized rules.
class RandomnessSource {
 public:
  explicit RandomnessSource(std::uint64_t seed) noexcept : seed_(seed) {}

  /// Uniform draw for step t in (0,1); pure in (seed, t).
  double draw(std::int64_t t) const noexcept;
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

}  // namespace mabbias
