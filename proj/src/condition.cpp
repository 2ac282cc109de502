#include "mabbias/condition.hpp"

#include <charconv>

#include "mabbias/error.hpp"

namespace mabbias {

namespace {

int parse_arm_suffix(std::string_view text, std::string_view prefix) {
  auto inner = text.substr(prefix.size());
  if (inner.size() < 2 || inner.back() != ')') throw ArgumentError("bad condition label: " + std::string(text));
  inner.remove_suffix(1);
  int k = 0;
  auto [ptr, ec] = std::from_chars(inner.data(), inner.data() + inner.size(), k);
  if (ec != std::errc{} || ptr != inner.data() + inner.size() || k < 1)
    throw ArgumentError("bad arm index in condition: " + std::string(text));
  return k;
}

}  // namespace

ConditionSpec ConditionSpec::parse(std::string_view text) {
  if (text == "marginal") return marginal();
  if (text == "early_stop") return early_stop();
  if (text == "line_cross") return line_cross();
  if (text == "accept_H0") return accept_h0();
  if (text == "accept_H1") return accept_h1();
  if (text == "reach_max") return reach_max();
  if (text.starts_with("chosen(")) return chosen(parse_arm_suffix(text, "chosen("));
  if (text.starts_with("not_chosen(")) return not_chosen(parse_arm_suffix(text, "not_chosen("));
  throw ArgumentError("unknown condition: " + std::string(text));
}

std::string ConditionSpec::label() const {
  switch (kind) {
    case Kind::marginal: return "marginal";
    case Kind::early_stop: return "early_stop";
    case Kind::line_cross: return "line_cross";
    case Kind::accept_h0: return "accept_H0";
    case Kind::accept_h1: return "accept_H1";
    case Kind::reach_max: return "reach_max";
    case Kind::chosen: return "chosen(" + std::to_string(arm) + ")";
    case Kind::not_chosen: return "not_chosen(" + std::to_string(arm) + ")";
  }
  return "?";
}

bool ConditionSpec::matches(const Trace& trace) const {
  if (trace.truncated) return false;
  switch (kind) {
    case Kind::marginal: return true;
    case Kind::early_stop:
    case Kind::reach_max: return trace.stop_reason == StopReason::max_time;
    case Kind::line_cross:
    case Kind::accept_h1: return trace.stop_reason == StopReason::upper_cross;
    case Kind::accept_h0: return trace.stop_reason == StopReason::lower_cross;
    case Kind::chosen: return trace.kappa == arm;
    case Kind::not_chosen: return trace.kappa != arm;
  }
  return false;
}

}  // namespace mabbias
