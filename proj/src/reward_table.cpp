#include "mabbias/reward_table.hpp"

#include <algorithm>
#include <string>

#include "mabbias/error.hpp"

namespace mabbias {

namespace hashing {

std::uint64_t hash_words(Domain domain, std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(domain));
  for (std::uint64_t w : words) h = mix64(h ^ mix64(w));
  return h;
}

}  // namespace hashing

RewardTable::RewardTable(std::uint64_t seed, std::vector<ArmSpec> arms)
    : seed_(seed), arms_(std::make_shared<const std::vector<ArmSpec>>(std::move(arms))) {
  if (arms_->empty()) throw ArgumentError("reward table needs at least one arm");
}

const ArmSpec& RewardTable::arm(int k) const {
  if (k < 1 || k > arm_count()) throw ArgumentError("arm index " + std::to_string(k) + " out of range");
  return (*arms_)[static_cast<std::size_t>(k - 1)];
}

void RewardTable::check_index(std::int64_t row, int arm) const {
  if (arm < 1 || arm > arm_count())
    throw ArgumentError("arm index " + std::to_string(arm) + " out of range [1," + std::to_string(arm_count()) + "]");
  if (row < 1) throw ArgumentError("row index must be >= 1, got " + std::to_string(row));
}

double RewardTable::cell(std::int64_t row, int arm) const {
  check_index(row, arm);
  const CellIndex key{row, arm};
  if (!overrides_.empty()) {
    auto it = std::lower_bound(overrides_.begin(), overrides_.end(), key,
                               [](const auto& entry, const CellIndex& k) { return entry.first < k; });
    if (it != overrides_.end() && it->first == key) return it->second;
  }
  const auto bits = hashing::hash_words(hashing::Domain::reward_cell,
                                        {seed_, static_cast<std::uint64_t>(row), static_cast<std::uint64_t>(arm)});
  return inverse_cdf((*arms_)[static_cast<std::size_t>(arm - 1)], hashing::to_open_unit(bits));
}

RewardTable RewardTable::with_cell_overridden(std::int64_t row, int arm, double value) const {
  check_index(row, arm);
  RewardTable out = *this;
  const CellIndex key{row, arm};
  auto it = std::lower_bound(out.overrides_.begin(), out.overrides_.end(), key,
                             [](const auto& entry, const CellIndex& k) { return entry.first < k; });
  if (it != out.overrides_.end() && it->first == key)
    it->second = value;
  else
    out.overrides_.insert(it, {key, value});
  return out;
}

RewardTable RewardTable::with_cells_overridden(std::vector<std::pair<CellIndex, double>> cells) const {
  for (const auto& [idx, value] : cells) check_index(idx.row, idx.arm);
  RewardTable out = *this;
  // Later entries win, both within `cells` and over existing overrides.
  std::stable_sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<CellIndex, double>> merged;
  merged.reserve(out.overrides_.size() + cells.size());
  auto a = out.overrides_.begin();
  auto b = cells.begin();
  while (a != out.overrides_.end() || b != cells.end()) {
    if (b == cells.end() || (a != out.overrides_.end() && a->first < b->first)) {
      merged.push_back(*a++);
      continue;
    }
    auto last = b;
    while (std::next(last) != cells.end() && std::next(last)->first == b->first) ++last;
    if (a != out.overrides_.end() && a->first == b->first) ++a;
    merged.push_back(*last);
    b = std::next(last);
  }
  out.overrides_ = std::move(merged);
  return out;
}

double RandomnessSource::draw(std::int64_t t) const noexcept {
  return hashing::to_open_unit(
      hashing::hash_words(hashing::Domain::external, {seed_, static_cast<std::uint64_t>(t)}));
}

}  // namespace mabbias
