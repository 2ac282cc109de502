#include "mabbias/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "mabbias/error.hpp"

namespace mabbias {

std::string_view label(Direction direction) noexcept {
  return direction == Direction::increasing ? "increasing" : "decreasing";
}

std::string_view label(Property property) noexcept {
  switch (property) {
    case Property::condition_increasing: return "condition_increasing";
    case Property::condition_decreasing: return "condition_decreasing";
    case Property::optimistic_sampling: return "optimistic_sampling";
    case Property::lil_ucb_coupling: return "lil_ucb_coupling";
    case Property::halving_coupling: return "halving_coupling";
  }
  return "?";
}

Property parse_property(std::string_view text) {
  for (auto p : {Property::condition_increasing, Property::condition_decreasing, Property::optimistic_sampling,
                 Property::lil_ucb_coupling, Property::halving_coupling})
    if (label(p) == text) return p;
  throw ArgumentError("unknown property: " + std::string(text));
}

std::uint64_t FiniteInstance::table_count() const {
  if (supports.empty() || horizon < 1) throw ConfigError("finite instance needs arms and a positive horizon");
  std::uint64_t n = 1;
  for (const auto& s : supports) {
    if (s.empty()) throw ConfigError("empty support");
    for (std::int64_t i = 0; i < horizon; ++i) {
      if (n > max_tables / s.size()) throw SizeGuardError("finite instance has more than " +
                                                          std::to_string(max_tables) + " tables");
      n *= s.size();
    }
  }
  return n;
}

std::vector<int> FiniteInstance::targets() const {
  if (target_arm) return {*target_arm};
  std::vector<int> all(static_cast<std::size_t>(arms()));
  for (int k = 0; k < arms(); ++k) all[static_cast<std::size_t>(k)] = k + 1;
  return all;
}

void FiniteInstance::validate() const {
  if (supports.empty()) throw ConfigError("finite instance needs at least one arm");
  for (const auto& s : supports) {
    if (s.empty()) throw ConfigError("empty support");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!std::isfinite(s[i])) throw ConfigError("support values must be finite");
      if (i > 0 && !(s[i - 1] < s[i])) throw ConfigError("support must be strictly ascending");
    }
  }
  if (horizon < 1 || horizon > 60000) throw ConfigError("horizon must be in [1, 60000]");
  if (threads < 1) throw ConfigError("threads must be positive");
  if (randomness_seeds.empty()) throw ConfigError("at least one randomness seed is required");
  if (target_arm && (*target_arm < 1 || *target_arm > arms())) throw ConfigError("target arm out of range");
  if ((condition.kind == ConditionSpec::Kind::chosen || condition.kind == ConditionSpec::Kind::not_chosen) &&
      (condition.arm < 1 || condition.arm > arms()))
    throw ConfigError("condition arm out of range");
  if (const auto* rules = std::get_if<RuleSet>(&algorithm)) {
    mabbias::validate(*rules, arms());
  } else {
    const auto& h = std::get<HalvingSpec>(algorithm);
    if (arms() < 2) throw ConfigError("sequential halving needs at least two arms");
    if (horizon < halving_max_pulls_per_arm(h.budget, arms()))
      throw ConfigError("horizon must cover every pull of the halving schedule");
  }
  (void)table_count();
}

namespace {

struct Layout {
  std::int64_t rows = 0;
  int arms = 0;
  std::vector<std::uint64_t> place;  // per position (arm-1)*rows + (row-1)
  std::vector<std::uint64_t> radix;
  std::uint64_t tables = 0;

  explicit Layout(const FiniteInstance& inst) : rows(inst.horizon), arms(inst.arms()) {
    tables = inst.table_count();
    std::uint64_t p = 1;
    for (int k = 0; k < arms; ++k) {
      for (std::int64_t i = 0; i < rows; ++i) {
        place.push_back(p);
        radix.push_back(inst.supports[static_cast<std::size_t>(k)].size());
        p *= inst.supports[static_cast<std::size_t>(k)].size();
      }
    }
  }
  std::size_t pos(std::int64_t row, int arm) const {
    return static_cast<std::size_t>(arm - 1) * static_cast<std::size_t>(rows) + static_cast<std::size_t>(row - 1);
  }
  std::uint64_t digit(std::uint64_t index, std::size_t p) const { return (index / place[p]) % radix[p]; }
};

std::vector<std::vector<double>> decode(const FiniteInstance& inst, const Layout& layout, std::uint64_t index) {
  std::vector<std::vector<double>> values(static_cast<std::size_t>(layout.arms));
  for (int k = 1; k <= layout.arms; ++k)
    for (std::int64_t i = 1; i <= layout.rows; ++i)
      values[static_cast<std::size_t>(k - 1)].push_back(
          inst.supports[static_cast<std::size_t>(k - 1)][layout.digit(index, layout.pos(i, k))]);
  return values;
}

std::vector<ArmSpec> arm_laws(const FiniteInstance& inst) {
  std::vector<ArmSpec> arms;
  for (const auto& s : inst.supports) arms.push_back(ArmSpec::uniform_over(s));
  return arms;
}

enum class Mode { full, sampling_only };

Algorithm algorithm_for(const FiniteInstance& inst, Mode mode) {
  if (mode == Mode::full) return inst.algorithm;
  const auto& rules = std::get<RuleSet>(inst.algorithm);
  return RuleSet{rules.sampling, stopping::FixedTime{inst.horizon}, choosing::Fixed{1}};
}

std::int64_t trajectory_steps(const FiniteInstance& inst) {
  if (const auto* h = std::get_if<HalvingSpec>(&inst.algorithm)) return h->budget;
  return inst.horizon;
}

Trace run(const FiniteInstance& inst, const Algorithm& algorithm, const RewardTable& table, std::uint64_t seed) {
  return run_algorithm(table, RandomnessSource(seed), algorithm, inst.horizon);
}

// Per-table results of one enumeration pass, stored flat.
struct Outcomes {
  int arms = 0;
  std::int64_t steps = 0;  // trajectory length (0 when not recorded)
  std::vector<std::uint16_t> trajectory;  // [table][t-1][arm-1]
  std::vector<std::uint16_t> final_counts;
  std::vector<std::uint8_t> truncated;
  std::vector<std::uint8_t> condition;
  std::vector<std::int8_t> kappa;

  std::uint16_t count_at(std::uint64_t table, std::int64_t t, int arm) const {
    return trajectory[(table * static_cast<std::uint64_t>(steps) + static_cast<std::uint64_t>(t - 1)) *
                          static_cast<std::uint64_t>(arms) +
                      static_cast<std::uint64_t>(arm - 1)];
  }
  std::uint16_t final_count(std::uint64_t table, int arm) const {
    return final_counts[table * static_cast<std::uint64_t>(arms) + static_cast<std::uint64_t>(arm - 1)];
  }
};

constexpr std::uint64_t kChunk = 2048;

// Runs body(begin, end, chunk) over fixed-size chunks of [0, n) on `threads` workers.
void parallel_chunks(std::uint64_t n, int threads, const std::function<void(std::uint64_t, std::uint64_t, std::size_t)>& body) {
  const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) body(c * kChunk, std::min(n, (c + 1) * kChunk), c);
  };
  const auto workers = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), chunks));
  if (workers <= 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
}

void record_trajectory(const Trace& trace, int arms, std::int64_t steps, std::uint16_t* out) {
  std::vector<std::uint16_t> counts(static_cast<std::size_t>(arms), 0);
  for (std::int64_t t = 1; t <= steps; ++t) {
    if (t <= static_cast<std::int64_t>(trace.actions.size())) ++counts[static_cast<std::size_t>(trace.actions[static_cast<std::size_t>(t - 1)] - 1)];
    std::copy(counts.begin(), counts.end(), out + (t - 1) * arms);
  }
}

Outcomes enumerate(const FiniteInstance& inst, const Layout& layout, Mode mode, bool with_trajectory,
                   std::uint64_t seed) {
  Outcomes out;
  out.arms = layout.arms;
  out.steps = with_trajectory ? trajectory_steps(inst) : 0;
  const auto n = layout.tables;
  const auto K = static_cast<std::uint64_t>(layout.arms);
  out.trajectory.resize(n * static_cast<std::uint64_t>(out.steps) * K);
  out.final_counts.resize(n * K);
  out.truncated.resize(n);
  out.condition.resize(n);
  out.kappa.resize(n);
  const auto algorithm = algorithm_for(inst, mode);
  const RewardTable base(inst.table_seed, arm_laws(inst));
  parallel_chunks(n, inst.threads, [&](std::uint64_t begin, std::uint64_t end, std::size_t) {
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      std::vector<std::pair<CellIndex, double>> cells;
      for (int k = 1; k <= layout.arms; ++k)
        for (std::int64_t i = 1; i <= layout.rows; ++i)
          cells.push_back({CellIndex{i, k}, inst.supports[static_cast<std::size_t>(k - 1)][layout.digit(idx, layout.pos(i, k))]});
      const auto trace = run(inst, algorithm, base.with_cells_overridden(std::move(cells)), seed);
      out.truncated[idx] = trace.truncated;
      out.condition[idx] = inst.condition.matches(trace);
      out.kappa[idx] = static_cast<std::int8_t>(trace.kappa);
      for (int k = 1; k <= layout.arms; ++k)
        out.final_counts[idx * K + static_cast<std::uint64_t>(k - 1)] =
            static_cast<std::uint16_t>(trace.final_state.count(k));
      if (with_trajectory)
        record_trajectory(trace, layout.arms, out.steps,
                          out.trajectory.data() + idx * static_cast<std::uint64_t>(out.steps) * K);
    }
  });
  return out;
}

struct Partial {
  std::uint64_t comparisons = 0;
  std::uint64_t skipped_truncated = 0;
  std::uint64_t skipped_unsampled = 0;
  std::optional<Counterexample> cx;
};

// Scans chunks of outer indices; the counterexample of the lowest chunk wins.
using Scanner = std::function<void(std::uint64_t idx, Partial& part)>;

Partial scan(std::uint64_t n, int threads, const Scanner& visit) {
  const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Partial> parts(chunks);
  parallel_chunks(n, threads, [&](std::uint64_t begin, std::uint64_t end, std::size_t c) {
    auto& part = parts[c];
    for (std::uint64_t idx = begin; idx < end && !part.cx; ++idx) visit(idx, part);
  });
  Partial total;
  for (auto& p : parts) {
    total.comparisons += p.comparisons;
    total.skipped_truncated += p.skipped_truncated;
    total.skipped_unsampled += p.skipped_unsampled;
    if (!total.cx && p.cx) total.cx = std::move(p.cx);
  }
  return total;
}

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

// a <= b for positive denominators.
bool less_equal(Rational a, Rational b) { return a.num * b.den <= b.num * a.den; }

std::string to_string(Rational r) {
  if (r.num == 0) return "0";
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

std::string condition_quantity_name(const FiniteInstance& inst, int k) {
  return "1(" + inst.condition.label() + ")/N_" + std::to_string(k) + "(T)";
}

// Walks every single-cell upward change of column k from table idx.
template <class F>
void for_each_upward(const Layout& layout, std::uint64_t idx, int k, F&& f) {
  for (std::int64_t i = 1; i <= layout.rows; ++i) {
    const auto p = layout.pos(i, k);
    const auto d = layout.digit(idx, p);
    for (auto d2 = d + 1; d2 < layout.radix[p]; ++d2)
      if (!f(i, d, d2, idx + (d2 - d) * layout.place[p])) return;
  }
}

Counterexample single_cell_cx(const FiniteInstance& inst, const Layout& layout, std::uint64_t idx, std::int64_t row,
                              int k, std::uint64_t d, std::uint64_t d2, std::uint64_t seed) {
  Counterexample cx;
  cx.table = decode(inst, layout, idx);
  const auto& s = inst.supports[static_cast<std::size_t>(k - 1)];
  cx.changes.push_back({row, k, s[d], s[d2]});
  cx.randomness_seed = seed;
  cx.quantity_arm = k;
  return cx;
}

MonotonicityReport finish(Property property, std::uint64_t tables, Partial&& part) {
  MonotonicityReport report;
  report.property = property;
  report.tables_checked = tables;
  report.comparisons = part.comparisons;
  report.skipped_truncated = part.skipped_truncated;
  report.skipped_unsampled = part.skipped_unsampled;
  report.counterexample = std::move(part.cx);
  report.pass = !report.counterexample;
  return report;
}

template <class PerSeed>
MonotonicityReport over_seeds(const FiniteInstance& inst, Property property, PerSeed&& per_seed) {
  inst.validate();
  const Layout layout(inst);
  Partial total;
  std::uint64_t tables = 0;
  for (auto seed : inst.randomness_seeds) {
    auto part = per_seed(layout, seed);
    tables += layout.tables;
    total.comparisons += part.comparisons;
    total.skipped_truncated += part.skipped_truncated;
    total.skipped_unsampled += part.skipped_unsampled;
    if (part.cx) {
      total.cx = std::move(part.cx);
      break;
    }
  }
  return finish(property, tables, std::move(total));
}

std::string count_text(std::int64_t n) { return std::to_string(n); }

}  // namespace

RewardTable materialize(const FiniteInstance& inst, const std::vector<std::vector<double>>& values) {
  if (values.size() != inst.supports.size()) throw ArgumentError("table has the wrong number of arms");
  std::vector<std::pair<CellIndex, double>> cells;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (static_cast<std::int64_t>(values[k].size()) != inst.horizon) throw ArgumentError("table has the wrong number of rows");
    for (std::size_t i = 0; i < values[k].size(); ++i)
      cells.push_back({CellIndex{static_cast<std::int64_t>(i + 1), static_cast<int>(k + 1)}, values[k][i]});
  }
  return RewardTable(inst.table_seed, arm_laws(inst)).with_cells_overridden(std::move(cells));
}

RewardTable materialize(const FiniteInstance& inst, std::uint64_t index) {
  const Layout layout(inst);
  if (index >= layout.tables) throw ArgumentError("table index out of range");
  return materialize(inst, decode(inst, layout, index));
}

MonotonicityReport check_condition_monotonicity(const FiniteInstance& inst, Direction direction) {
  const auto property =
      direction == Direction::increasing ? Property::condition_increasing : Property::condition_decreasing;
  return over_seeds(inst, property, [&](const Layout& layout, std::uint64_t seed) {
    const auto out = enumerate(inst, layout, Mode::full, false, seed);
    const auto targets = inst.targets();
    return scan(layout.tables, inst.threads, [&](std::uint64_t idx, Partial& part) {
      for (int k : targets) {
        for_each_upward(layout, idx, k, [&](std::int64_t row, std::uint64_t d, std::uint64_t d2, std::uint64_t p) {
          ++part.comparisons;
          if (out.truncated[idx] || out.truncated[p]) {
            ++part.skipped_truncated;
            return true;
          }
          const Rational before{out.condition[idx], out.condition[idx] ? out.final_count(idx, k) : 1};
          const Rational after{out.condition[p], out.condition[p] ? out.final_count(p, k) : 1};
          if (before.den == 0 || after.den == 0) {
            ++part.skipped_unsampled;
            return true;
          }
          const bool ok = direction == Direction::increasing ? less_equal(before, after) : less_equal(after, before);
          if (ok) return true;
          auto cx = single_cell_cx(inst, layout, idx, row, k, d, d2, seed);
          cx.quantity = condition_quantity_name(inst, k);
          cx.before = to_string(before);
          cx.after = to_string(after);
          cx.detail = "raising the cell should make the quantity " + std::string(label(direction));
          part.cx = std::move(cx);
          return false;
        });
        if (part.cx) return;
      }
    });
  });
}

MonotonicityReport check_optimistic_sampling(const FiniteInstance& inst) {
  if (!std::holds_alternative<RuleSet>(inst.algorithm)) throw ConfigError("optimistic sampling needs a rule set");
  return over_seeds(inst, Property::optimistic_sampling, [&](const Layout& layout, std::uint64_t seed) {
    const auto out = enumerate(inst, layout, Mode::sampling_only, true, seed);
    const auto targets = inst.targets();
    return scan(layout.tables, inst.threads, [&](std::uint64_t idx, Partial& part) {
      for (int k : targets) {
        for_each_upward(layout, idx, k, [&](std::int64_t row, std::uint64_t d, std::uint64_t d2, std::uint64_t p) {
          for (std::int64_t t = 1; t <= out.steps; ++t) {
            ++part.comparisons;
            if (out.count_at(idx, t, k) <= out.count_at(p, t, k)) continue;
            auto cx = single_cell_cx(inst, layout, idx, row, k, d, d2, seed);
            cx.quantity = "N_" + std::to_string(k) + "(t)";
            cx.time = t;
            cx.before = count_text(out.count_at(idx, t, k));
            cx.after = count_text(out.count_at(p, t, k));
            cx.detail = "raising a reward of the arm reduced its pull count";
            part.cx = std::move(cx);
            return false;
          }
          return true;
        });
        if (part.cx) return;
      }
    });
  });
}

MonotonicityReport check_lil_ucb_coupling(const FiniteInstance& inst) {
  const auto* rules = std::get_if<RuleSet>(&inst.algorithm);
  if (!rules || !std::holds_alternative<sampling::LilUcb>(rules->sampling))
    throw ConfigError("lil'UCB coupling needs the lil_ucb sampling rule");
  return over_seeds(inst, Property::lil_ucb_coupling, [&](const Layout& layout, std::uint64_t seed) {
    const auto out = enumerate(inst, layout, Mode::sampling_only, true, seed);
    const auto targets = inst.targets();
    return scan(layout.tables, inst.threads, [&](std::uint64_t base, Partial& part) {
      for (int k : targets) {
        const auto first = layout.pos(1, k);
        const auto stride = layout.place[first];
        std::uint64_t span = 1;
        for (std::int64_t i = 0; i < layout.rows; ++i) span *= layout.radix[first];
        if ((base / stride) % span != 0) continue;  // visit each group once, from its column-k-zero member
        for (std::uint64_t a = 0; a < span; ++a) {
          const auto ta = base + a * stride;
          for (std::uint64_t b = 0; b < span; ++b) {
            if (a == b) continue;
            const auto tb = base + b * stride;
            for (std::int64_t t = 1; t <= out.steps; ++t) {
              ++part.comparisons;
              if (out.count_at(ta, t, k) > out.count_at(tb, t, k)) continue;
              for (int j = 1; j <= layout.arms; ++j) {
                if (j == k || out.count_at(ta, t, j) >= out.count_at(tb, t, j)) continue;
                Counterexample cx;
                cx.table = decode(inst, layout, ta);
                const auto other = decode(inst, layout, tb);
                for (std::int64_t i = 1; i <= layout.rows; ++i) {
                  const auto x = cx.table[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i - 1)];
                  const auto y = other[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i - 1)];
                  if (x != y) cx.changes.push_back({i, k, x, y});
                }
                cx.randomness_seed = seed;
                cx.quantity = "N_" + std::to_string(j) + "(t)";
                cx.quantity_arm = j;
                cx.time = t;
                cx.before = count_text(out.count_at(ta, t, j));
                cx.after = count_text(out.count_at(tb, t, j));
                cx.detail = "N_" + std::to_string(k) + "(t) went " + count_text(out.count_at(ta, t, k)) + " -> " +
                            count_text(out.count_at(tb, t, k)) + " but N_" + std::to_string(j) + "(t) increased";
                part.cx = std::move(cx);
                return;
              }
            }
          }
        }
      }
    });
  });
}

MonotonicityReport check_halving_coupling(const FiniteInstance& inst) {
  if (!std::holds_alternative<HalvingSpec>(inst.algorithm)) throw ConfigError("halving coupling needs a halving budget");
  return over_seeds(inst, Property::halving_coupling, [&](const Layout& layout, std::uint64_t seed) {
    const auto out = enumerate(inst, layout, Mode::full, true, seed);
    const auto targets = inst.targets();
    return scan(layout.tables, inst.threads, [&](std::uint64_t idx, Partial& part) {
      for (int k : targets) {
        for_each_upward(layout, idx, k, [&](std::int64_t row, std::uint64_t d, std::uint64_t d2, std::uint64_t p) {
          for (std::int64_t t = 1; t <= out.steps; ++t) {
            ++part.comparisons;
            if (out.count_at(idx, t, k) <= out.count_at(p, t, k)) continue;
            auto cx = single_cell_cx(inst, layout, idx, row, k, d, d2, seed);
            cx.quantity = "N_" + std::to_string(k) + "(t)";
            cx.time = t;
            cx.before = count_text(out.count_at(idx, t, k));
            cx.after = count_text(out.count_at(p, t, k));
            cx.detail = "pull count of the raised arm dropped";
            part.cx = std::move(cx);
            return false;
          }
          ++part.comparisons;
          if (out.kappa[idx] == k && out.kappa[p] != k) {
            auto cx = single_cell_cx(inst, layout, idx, row, k, d, d2, seed);
            cx.quantity = "1(kappa=" + std::to_string(k) + ")";
            cx.before = "1";
            cx.after = "0";
            cx.detail = "raising a reward of the chosen arm unseated it";
            part.cx = std::move(cx);
            return false;
          }
          return true;
        });
        if (part.cx) return;
      }
    });
  });
}

MonotonicityReport check(const FiniteInstance& inst, Property property) {
  switch (property) {
    case Property::condition_increasing: return check_condition_monotonicity(inst, Direction::increasing);
    case Property::condition_decreasing: return check_condition_monotonicity(inst, Direction::decreasing);
    case Property::optimistic_sampling: return check_optimistic_sampling(inst);
    case Property::lil_ucb_coupling: return check_lil_ucb_coupling(inst);
    case Property::halving_coupling: return check_halving_coupling(inst);
  }
  throw ArgumentError("unknown property");
}

ReplayResult replay(const FiniteInstance& inst, Property property, const Counterexample& cx) {
  inst.validate();
  if (cx.changes.empty()) throw ArgumentError("counterexample has no changed cells");
  const auto base = materialize(inst, cx.table);
  std::vector<std::pair<CellIndex, double>> cells;
  for (const auto& c : cx.changes) cells.push_back({CellIndex{c.row, c.arm}, c.after});
  const auto perturbed = base.with_cells_overridden(std::move(cells));
  const int k = cx.changes.front().arm;
  const int j = cx.quantity_arm;

  const bool sampling_only = property == Property::optimistic_sampling || property == Property::lil_ucb_coupling;
  const auto algorithm = algorithm_for(inst, sampling_only ? Mode::sampling_only : Mode::full);
  const auto a = run(inst, algorithm, base, cx.randomness_seed);
  const auto b = run(inst, algorithm, perturbed, cx.randomness_seed);

  ReplayResult r;
  switch (property) {
    case Property::condition_increasing:
    case Property::condition_decreasing: {
      if (a.truncated || b.truncated) {
        r.before = a.truncated ? "truncated" : "";
        r.after = b.truncated ? "truncated" : "";
        return r;
      }
      auto q = [&](const Trace& tr) {
        const bool c = inst.condition.matches(tr);
        return Rational{c, c ? tr.final_state.count(k) : 1};
      };
      const auto qa = q(a), qb = q(b);
      r.before = to_string(qa);
      r.after = to_string(qb);
      if (qa.den > 0 && qb.den > 0)
        r.violated = property == Property::condition_increasing ? !less_equal(qa, qb) : !less_equal(qb, qa);
      return r;
    }
    case Property::optimistic_sampling:
    case Property::lil_ucb_coupling:
    case Property::halving_coupling: {
      if (cx.time == 0) {
        const bool ca = a.kappa == k, cb = b.kappa == k;
        r.before = ca ? "1" : "0";
        r.after = cb ? "1" : "0";
        r.violated = ca && !cb;
        return r;
      }
      const auto na = a.counts_at(cx.time), nb = b.counts_at(cx.time);
      const auto nj_a = na[static_cast<std::size_t>(j - 1)], nj_b = nb[static_cast<std::size_t>(j - 1)];
      r.before = count_text(nj_a);
      r.after = count_text(nj_b);
      if (property == Property::lil_ucb_coupling)
        r.violated = na[static_cast<std::size_t>(k - 1)] <= nb[static_cast<std::size_t>(k - 1)] && nj_a < nj_b;
      else
        r.violated = nj_a > nj_b;
      return r;
    }
  }
  return r;
}

}  // namespace mabbias
