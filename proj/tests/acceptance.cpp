// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mabbias/experiment.hpp"

using namespace mabbias;

namespace {

constexpr double kZ = 3.0;

struct Line {
  bool ok = true;
  std::string notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes += (notes.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

BiasReport run(const ExperimentConfig& c, int threads = 1) {
  auto options = c.options;
  options.threads = threads;
  return estimate(c.design, options);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double mean_bias(const BiasReport& r, const std::string& cond, int arm) {
  return r.condition(cond).arm(arm).statistic("mean").bias;
}

Verdict mean_verdict(const BiasReport& r, const std::string& cond, int arm) {
  return r.condition(cond).arm(arm).statistic("mean").verdict;
}

Line criterion1(double& runtime) {
  Line line;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run(preset("E1"));
  runtime = seconds_since(t0);
  const double m = mean_bias(r, "marginal", 1), e = mean_bias(r, "early_stop", 1), l = mean_bias(r, "line_cross", 1);
  line.require(std::abs(m - 0.22) <= 0.02, fmt("marginal %.4f not within 0.22+-0.02", m));
  line.require(std::abs(e + 0.16) <= 0.02, fmt("early_stop %.4f not within -0.16+-0.02", e));
  line.require(std::abs(l - 0.75) <= 0.03, fmt("line_cross %.4f not within 0.75+-0.03", l));
  line.require(runtime < 30.0, fmt("runtime %.1fs >= 30s", runtime));
  line.notes += (line.notes.empty() ? "" : " | ") + fmt("biases (%.4f, %.4f, %.4f)", m, e, l) + fmt(", %.2fs", runtime);
  return line;
}

Line criterion2() {
  Line line;
  const auto r = run(preset("E1"));
  line.require(r.condition("marginal").arm(1).cdf.below_truth_within(kZ), "marginal CDF exceeds F + 3SE");
  line.require(r.condition("line_cross").arm(1).cdf.below_truth_within(kZ), "line_cross CDF exceeds F + 3SE");
  line.require(r.condition("early_stop").arm(1).cdf.above_truth_within(kZ), "early_stop CDF falls below F - 3SE");
  return line;
}

// Condition-level sign checks: positive mean bias with the CDF below the truth,
// or negative with the CDF above it.
void expect_sign(Line& line, const BiasReport& r, const std::string& cond, int arm, bool positive,
                 const std::string& tag) {
  const auto& a = r.condition(cond).arm(arm);
  const auto want = positive ? Verdict::positive : Verdict::negative;
  const auto got = a.statistic("mean").verdict;
  line.require(got == want, tag + " " + cond + " arm " + std::to_string(arm) + " mean verdict " + std::string(label(got)));
  if (positive)
    line.require(a.cdf.below_truth_within(kZ), tag + " " + cond + " arm " + std::to_string(arm) + " CDF above F + 3SE");
  else
    line.require(a.cdf.above_truth_within(kZ), tag + " " + cond + " arm " + std::to_string(arm) + " CDF below F - 3SE");
}

Line criterion3() {
  Line line;
  for (const char* name : {"E2", "E2alt"}) {
    const auto r = run(preset(name));
    for (const char* cond : {"accept_H0", "accept_H1"}) {
      if (r.condition(cond).empty()) {
        line.require(false, std::string(name) + " " + cond + " never occurred");
        continue;
      }
      const bool h1 = std::string(cond) == "accept_H1";
      expect_sign(line, r, cond, 1, h1, name);
      expect_sign(line, r, cond, 2, !h1, name);
    }
  }
  return line;
}

void choice_signs(Line& line, const BiasReport& r, int arms, const std::string& tag) {
  for (int k = 1; k <= arms; ++k) {
    const auto chosen = "chosen(" + std::to_string(k) + ")";
    const auto not_chosen = "not_chosen(" + std::to_string(k) + ")";
    if (!r.condition(chosen).empty()) expect_sign(line, r, chosen, k, true, tag);
    if (!r.condition(not_chosen).empty()) expect_sign(line, r, not_chosen, k, false, tag);
  }
}

Line criterion4() {
  Line line;
  const auto r = run(preset("E3"));
  line.require(r.truncated == 0, "truncated trials: " + std::to_string(r.truncated));
  choice_signs(line, r, 3, "E3");
  return line;
}

Line criterion5() {
  Line line;
  const auto r = run(preset("E4"));
  for (int k = 1; k <= 3; ++k) {
    const auto& a = r.condition("marginal").arm(k);
    line.require(a.statistic("mean").verdict != Verdict::positive, "marginal arm " + std::to_string(k) + " positive");
    line.require(a.cdf.above_truth_within(kZ), "marginal arm " + std::to_string(k) + " CDF below F - 3SE");
  }
  choice_signs(line, r, 3, "E4");
  return line;
}

Line criterion6(double& runtime) {
  Line line;
  const auto t0 = std::chrono::steady_clock::now();
  auto run_preset = [&](const std::string& name, bool expect_pass) {
    auto p = check_preset(name);
    for (auto prop : p.properties) {
      const auto rep = check(p.instance, prop);
      if (expect_pass) {
        line.require(rep.pass, name + " " + std::string(label(prop)) + " found a counterexample");
        line.require(rep.comparisons > 0, name + " " + std::string(label(prop)) + " compared nothing");
      } else {
        line.require(!rep.pass, name + " " + std::string(label(prop)) + " missed the constructed violation");
        if (rep.counterexample)
          line.require(replay(p.instance, prop, *rep.counterexample).violated, name + " counterexample does not replay");
      }
    }
  };
  for (const char* name : {"e1-early", "e1-line", "lilucb-k2", "lilucb-k3", "halving-k2", "halving-k3"})
    run_preset(name, true);
  run_preset("broken-argmin", false);
  run_preset("broken-sampler", false);
  runtime = seconds_since(t0);
  line.require(runtime < 60.0, fmt("runtime %.1fs >= 60s", runtime));
  line.notes += (line.notes.empty() ? "" : " | ") + fmt("%.2fs", runtime);
  return line;
}

Line criterion7() {
  Line line;
  const auto r = run(preset("nonadaptive"));
  const auto& a = r.condition("marginal").arm(1);
  const auto& m = a.statistic("mean");
  line.require(std::abs(m.bias) < kZ * m.se, fmt("mean bias %.5f vs 3SE %.5f", m.bias, kZ * m.se));
  int bad = 0;
  for (std::size_t g = 0; g < a.cdf.bias.size(); ++g)
    if (!(std::abs(a.cdf.bias[g]) < kZ * a.cdf.se[g])) ++bad;
  line.require(bad == 0, std::to_string(bad) + " CDF grid points with |bias| >= 3SE");
  return line;
}

Line criterion8() {
  Line line;
  const auto r = run(preset("E5"));
  auto var = [&](const char* c) { return r.condition(c).arm(1).statistic("variance").verdict; };
  line.require(var("marginal") == Verdict::negative, "marginal variance verdict " + std::string(label(var("marginal"))));
  line.require(var("early_stop") == Verdict::negative, "early_stop variance verdict " + std::string(label(var("early_stop"))));
  line.require(var("line_cross") == Verdict::positive, "line_cross variance verdict " + std::string(label(var("line_cross"))));
  const std::vector<std::pair<const char*, double>> anchors{{"marginal", 0.22}, {"early_stop", -0.16}, {"line_cross", 0.75}};
  for (const auto& [c, target] : anchors) {
    const auto& med = r.condition(c).arm(1).statistic("median");
    const auto mean_v = r.condition(c).arm(1).statistic("mean").verdict;
    line.require(med.verdict == mean_v, std::string(c) + " median sign differs from mean");
    line.require(std::abs(med.bias - target) <= 0.05, std::string(c) + fmt(" median bias %.4f not within %.2f+-0.05", med.bias, target));
  }
  return line;
}

Line criterion9() {
  Line line;
  for (const char* name : {"E1", "E3", "E4"}) {
    const auto c = preset(name);
    std::ostringstream one, eight;
    write_csv(one, run(c, 1));
    write_csv(eight, run(c, 8));
    line.require(one.str() == eight.str(), std::string(name) + " CSV differs between 1 and 8 workers");
  }
  return line;
}

}  // namespace

int main() {
  double t1 = 0, t6 = 0;
  const std::vector<std::pair<std::string, std::function<Line()>>> criteria{
      {"E1 mean-bias anchor", [&] { return criterion1(t1); }},
      {"E1 CDF dominance", criterion2},
      {"E2/E2alt sign pattern", criterion3},
      {"E3 lil'UCB chosen/not-chosen signs", criterion4},
      {"E4 sequential halving signs", criterion5},
      {"monotonicity oracle suite", [&] { return criterion6(t6); }},
      {"nonadaptive unbiasedness control", criterion7},
      {"E5 variance and median", criterion8},
      {"determinism across worker counts", criterion9},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Line line;
    try {
      line = criteria[i].second();
    } catch (const std::exception& e) {
      line.ok = false;
      line.notes = std::string("exception: ") + e.what();
    }
    if (!line.ok) ++failed;
    std::printf("%s criterion %zu: %s%s%s\n", line.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                line.notes.empty() ? "" : " -- ", line.notes.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
