#pragma once

#include <string>
#include <string_view>

#include "mabbias/engine.hpp"

namespace mabbias {

/// Conditioning event C, evaluated on what is known at the stopping time.
struct ConditionSpec {
  enum class Kind { marginal, early_stop, line_cross, accept_h0, accept_h1, reach_max, chosen, not_chosen };

  Kind kind = Kind::marginal;
  int arm = 0;  // for chosen / not_chosen

  static ConditionSpec marginal() { return {Kind::marginal, 0}; }
  static ConditionSpec early_stop() { return {Kind::early_stop, 0}; }
  static ConditionSpec line_cross() { return {Kind::line_cross, 0}; }
  static ConditionSpec accept_h0() { return {Kind::accept_h0, 0}; }
  static ConditionSpec accept_h1() { return {Kind::accept_h1, 0}; }
  static ConditionSpec reach_max() { return {Kind::reach_max, 0}; }
  static ConditionSpec chosen(int k) { return {Kind::chosen, k}; }
  static ConditionSpec not_chosen(int k) { return {Kind::not_chosen, k}; }

  /// Inverse of label(): "marginal", "accept_H0", "chosen(2)", ...
  static ConditionSpec parse(std::string_view text);

  std::string label() const;
  /// Truncated traces never match.
  bool matches(const Trace& trace) const;

  bool operator==(const ConditionSpec&) const = default;
};

}  // namespace mabbias
