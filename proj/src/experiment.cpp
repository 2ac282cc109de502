#include "mabbias/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "mabbias/error.hpp"

namespace mabbias {

namespace {

std::vector<ArmSpec> normals(std::initializer_list<double> means) {
  std::vector<ArmSpec> arms;
  for (double m : means) arms.push_back(ArmSpec::normal(m, 1.0));
  return arms;
}

std::vector<ConditionSpec> choice_conditions(int arms) {
  std::vector<ConditionSpec> c;
  for (int k = 1; k <= arms; ++k) {
    c.push_back(ConditionSpec::chosen(k));
    c.push_back(ConditionSpec::not_chosen(k));
  }
  return c;
}

ExperimentConfig make(std::string name, std::vector<ArmSpec> arms, Algorithm algorithm, std::int64_t cap,
                      std::vector<ConditionSpec> conditions) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.design.arms = std::move(arms);
  c.design.algorithm = std::move(algorithm);
  c.design.horizon_cap = cap;
  c.options.conditions = std::move(conditions);
  c.options.reps = 100'000;
  c.options.base_seed = 1;
  return c;
}

RuleSet e1_rules(std::int64_t m) {
  return RuleSet{sampling::SingleArm{},
                 stopping::MinOf{{stopping::UpperBoundary{0.2, 2}, stopping::FixedTime{m}}}, choosing::Fixed{1}};
}

RuleSet e2_rules() {
  return RuleSet{sampling::AlternateTwoArms{}, stopping::MinOf{{stopping::TwoSidedEven{0.2}, stopping::FixedTime{100}}},
                 choosing::ArgmaxMean{}};
}

RuleSet lil_rules() {
  return RuleSet{sampling::LilUcb{0.5, 0.1, 0.2, 1.0}, stopping::CountDominance{1.0}, choosing::ArgmaxCount{}};
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

std::vector<std::string> run_preset_names() { return {"E1", "E2", "E2alt", "E3", "E4", "E5", "nonadaptive"}; }

ExperimentConfig preset(std::string_view name) {
  const auto e1_conditions = std::vector{ConditionSpec::marginal(), ConditionSpec::early_stop(), ConditionSpec::line_cross()};
  const auto e2_conditions = std::vector{ConditionSpec::marginal(), ConditionSpec::accept_h0(), ConditionSpec::accept_h1(),
                                         ConditionSpec::reach_max()};
  if (name == "E1") return make("E1", normals({0.0}), e1_rules(10), 10, e1_conditions);
  if (name == "E2") return make("E2", normals({0.0, 0.0}), e2_rules(), 100, e2_conditions);
  if (name == "E2alt") return make("E2alt", normals({1.0, 0.0}), e2_rules(), 100, e2_conditions);
  if (name == "E3") return make("E3", normals({1.0, 0.5, 0.0}), lil_rules(), 1'000'000, choice_conditions(3));
  if (name == "E4") {
    auto conditions = choice_conditions(3);
    conditions.insert(conditions.begin(), ConditionSpec::marginal());
    return make("E4", normals({1.0, 0.5, 0.0}), HalvingSpec{10}, 10, conditions);
  }
  if (name == "E5") {
    auto c = make("E5", normals({0.0}), e1_rules(10), 10, e1_conditions);
    c.options.functionals = {FunctionalSpec::variance(), FunctionalSpec::median(), FunctionalSpec::mean()};
    return c;
  }
  if (name == "nonadaptive")
    return make("nonadaptive", normals({0.0}),
                RuleSet{sampling::SingleArm{}, stopping::FixedTime{10}, choosing::Fixed{1}}, 10,
                {ConditionSpec::marginal()});
  throw ConfigError("unknown preset: " + std::string(name));
}

std::vector<std::string> check_preset_names() {
  return {"e1-early", "e1-line", "lilucb-k2", "lilucb-k3", "halving-k2", "halving-k3", "broken-argmin", "broken-sampler"};
}

CheckPreset check_preset(std::string_view name) {
  CheckPreset p;
  p.name = std::string(name);
  auto& inst = p.instance;
  if (name == "e1-early" || name == "e1-line") {
    inst.supports = {{0.0, 1.0}};
    inst.horizon = 3;
    inst.algorithm = e1_rules(3);
    inst.target_arm = 1;
    const bool early = name == "e1-early";
    inst.condition = early ? ConditionSpec::early_stop() : ConditionSpec::line_cross();
    p.properties = {early ? Property::condition_decreasing : Property::condition_increasing};
    p.summary = early ? "1(early_stop)/N_1(T) is non-increasing in every reward"
                      : "1(line_cross)/N_1(T) is non-decreasing in every reward";
  } else if (name == "lilucb-k2" || name == "lilucb-k3") {
    inst.supports.assign(name == "lilucb-k2" ? 2 : 3, {0.0, 1.0});
    inst.horizon = 6;
    inst.algorithm = lil_rules();
    p.properties = {Property::optimistic_sampling, Property::lil_ucb_coupling};
    p.summary = "lil'UCB pull counts are optimistic and coupled across arms";
  } else if (name == "halving-k2" || name == "halving-k3") {
    const int arms = name == "halving-k2" ? 2 : 3;
    const std::int64_t budget = arms == 2 ? 4 : 12;
    inst.supports.assign(static_cast<std::size_t>(arms), {0.0, 1.0});
    inst.algorithm = HalvingSpec{budget};
    inst.horizon = halving_max_pulls_per_arm(budget, arms);
    p.properties = {Property::halving_coupling};
    p.summary = "sequential halving counts and selection respond monotonically to an arm's rewards";
  } else if (name == "broken-argmin") {
    inst.supports = {{0.0, 1.0}, {0.0, 1.0}};
    inst.horizon = 2;
    inst.algorithm = RuleSet{sampling::AlternateTwoArms{}, stopping::FixedTime{2}, choosing::ArgminMean{}};
    inst.target_arm = 1;
    inst.condition = ConditionSpec::chosen(1);
    p.properties = {Property::condition_increasing};
    p.summary = "choosing the worst-looking arm is not optimistic (expects a counterexample)";
  } else if (name == "broken-sampler") {
    inst.supports = {{0.0, 1.0}, {0.0, 1.0}};
    inst.horizon = 4;
    inst.algorithm = RuleSet{sampling::LowestMean{}, stopping::FixedTime{4}, choosing::ArgmaxMean{}};
    p.properties = {Property::optimistic_sampling};
    p.summary = "pulling the lowest sample mean is not optimistic (expects a counterexample)";
  } else {
    throw ConfigError("unknown check instance: " + std::string(name));
  }
  return p;
}

CdfGrid parse_grid(std::string_view text) {
  const auto a = text.find(':');
  const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
  if (b == std::string_view::npos) throw ConfigError("grid must look like lo:hi:n");
  auto to_double = [&](std::string_view s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(std::string(s), &used);
      if (used != s.size()) throw ConfigError("bad number in grid: " + std::string(s));
      return v;
    } catch (const std::logic_error&) {
      throw ConfigError("bad number in grid: " + std::string(s));
    }
  };
  const auto ns = text.substr(b + 1);
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(ns.data(), ns.data() + ns.size(), n);
  if (ec != std::errc{} || ptr != ns.data() + ns.size()) throw ConfigError("bad point count in grid");
  try {
    return CdfGrid::equispaced(to_double(text.substr(0, a)), to_double(text.substr(a + 1, b - a - 1)), n);
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("invalid grid: ") + e.what());
  }
}

std::string default_output_dir() {
  if (const char* env = std::getenv("MABBIAS_OUT_DIR"); env && *env) return env;
  return "mabbias-out";
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace

RunOutcome run_experiment(ExperimentConfig config, const RunOverrides& overrides, std::ostream& log) {
  if (overrides.reps) config.options.reps = *overrides.reps;
  if (overrides.seed) config.options.base_seed = *overrides.seed;
  if (overrides.grid) config.options.grid = *overrides.grid;
  config.options.threads = overrides.threads;
  std::string dir = overrides.out_dir.value_or(config.output_dir.empty() ? default_output_dir() : config.output_dir);
  std::filesystem::create_directories(dir);
  const std::filesystem::path base = std::filesystem::path(dir) / config.name;

  RunOutcome outcome;
  outcome.report = estimate(config.design, config.options);
  const auto& report = outcome.report;

  {
    auto path = base.string() + ".csv";
    auto out = open_out(path);
    write_csv(out, report);
    outcome.files.push_back(path);
  }
  {
    auto path = base.string() + ".json";
    auto out = open_out(path);
    Json j;
    j["config"] = to_json(config);
    j["report"] = to_json(report);
    out << j.dump(2) << '\n';
    outcome.files.push_back(path);
  }
  if (overrides.plot) {
    auto path = base.string() + ".svg";
    auto out = open_out(path);
    write_cdf_svg(out, report, config.name);
    outcome.files.push_back(path);
  }
  for (std::int64_t r = 0; r < std::min(overrides.dump_traces, config.options.reps); ++r) {
    const RewardTable table(trial_table_seed(config.options.base_seed, r), config.design.arms);
    const RandomnessSource w(trial_randomness_seed(config.options.base_seed, r));
    const auto trace = run_algorithm(table, w, config.design.algorithm, config.design.horizon_cap);
    auto path = base.string() + "-trace-" + std::to_string(r) + ".csv";
    auto out = open_out(path);
    write_trace_csv(out, trace);
    outcome.files.push_back(path);
  }

  log << config.name << ": " << report.total_reps << " reps, " << report.truncated << " truncated, seed "
      << report.seed << '\n';
  for (const auto& cs : report.conditions) {
    log << "  " << cs.condition.label() << "  n=" << cs.n << "  P=" << format_double(cs.probability);
    for (const auto& as : cs.arms)
      for (const auto& s : as.statistics)
        log << "  " << s.name << '[' << as.arm << "]=" << format_double(s.bias) << " (" << label(s.verdict) << ')';
    log << '\n';
  }
  if (report.has_empty_condition()) {
    for (const auto& cs : report.conditions)
      if (cs.empty()) log << "warning: condition " << cs.condition.label() << " never occurred\n";
    outcome.exit_code = 2;
  }
  for (const auto& f : outcome.files) log << "wrote " << f << '\n';
  return outcome;
}

void write_cdf_svg(std::ostream& out, const BiasReport& report, const std::string& title) {
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"};
  constexpr double W = 420, H = 300, L = 50, T = 40, PW = 340, PH = 210;
  int arms = 0;
  for (const auto& cs : report.conditions)
    for (const auto& as : cs.arms) arms = std::max(arms, as.arm);
  const auto& g = report.grid.points();
  const double lo = g.front(), hi = g.back();
  auto px = [&](double x) { return L + (x - lo) / (hi - lo) * PW; };
  auto py = [&](double y) { return T + (1.0 - y) * PH; };
  auto polyline = [&](const std::vector<double>& ys, const char* color, const char* extra, double dx) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" " << extra << " points=\"";
    for (std::size_t i = 0; i < g.size(); ++i)
      if (std::isfinite(ys[i])) out << format_double(dx + px(g[i])) << ',' << format_double(py(ys[i])) << ' ';
    out << "\"/>\n";
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W * std::max(arms, 1) << "\" height=\"" << H + 20
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<text x=\"10\" y=\"16\" font-size=\"13\">" << title << ": average empirical CDF by condition</text>\n";
  for (int k = 1; k <= arms; ++k) {
    const double dx = (k - 1) * W;
    out << "<rect x=\"" << dx + L << "\" y=\"" << T << "\" width=\"" << PW << "\" height=\"" << PH
        << "\" fill=\"none\" stroke=\"#999\"/>\n";
    out << "<text x=\"" << dx + L << "\" y=\"" << T - 6 << "\">arm " << k << "</text>\n";
    for (double tick : {0.0, 0.5, 1.0})
      out << "<text x=\"" << dx + L - 28 << "\" y=\"" << py(tick) + 4 << "\">" << tick << "</text>\n";
    out << "<text x=\"" << dx + L << "\" y=\"" << T + PH + 14 << "\">" << format_double(lo) << "</text>\n";
    out << "<text x=\"" << dx + L + PW - 16 << "\" y=\"" << T + PH + 14 << "\">" << format_double(hi) << "</text>\n";
    bool truth_drawn = false;
    int line = 0;
    for (std::size_t c = 0; c < report.conditions.size(); ++c) {
      const auto& cs = report.conditions[c];
      if (cs.empty()) continue;
      const auto& as = cs.arm(k);
      if (!truth_drawn) {
        polyline(as.cdf.reference, "#000", "stroke-dasharray=\"4 3\"", dx);
        truth_drawn = true;
      }
      const char* color = kColors[c % std::size(kColors)];
      polyline(as.cdf.estimate, color, "", dx);
      out << "<text x=\"" << dx + L + 8 << "\" y=\"" << T + 14 + 13 * line++ << "\" fill=\"" << color << "\">"
          << cs.condition.label() << "</text>\n";
    }
    out << "<text x=\"" << dx + L + 8 << "\" y=\"" << T + 14 + 13 * line << "\">true CDF (dashed)</text>\n";
  }
  out << "</svg>\n";
}

CheckOutcome run_check(CheckPreset preset, std::optional<std::uint64_t> max_tables, const std::string& out_dir,
                       int threads, std::ostream& log) {
  if (max_tables) preset.instance.max_tables = *max_tables;
  preset.instance.threads = threads;
  CheckOutcome outcome;
  Json results = Json::array();
  for (auto property : preset.properties) {
    auto report = check(preset.instance, property);
    log << preset.name << ' ' << label(property) << ": " << (report.pass ? "pass" : "counterexample") << " ("
        << report.tables_checked << " tables, " << report.comparisons << " comparisons";
    if (report.skipped_truncated) log << ", " << report.skipped_truncated << " truncated pairs skipped";
    log << ")\n";
    results.push_back(to_json(report));
    const bool failed = !report.pass;
    outcome.reports.push_back(std::move(report));
    if (failed) break;
  }
  Json j;
  j["preset"] = preset.name;
  j["summary"] = preset.summary;
  j["instance"] = to_json(preset.instance);
  j["results"] = results;
  std::filesystem::create_directories(out_dir);
  outcome.json_path = (std::filesystem::path(out_dir) / ("check-" + preset.name + ".json")).string();
  auto out = open_out(outcome.json_path);
  out << j.dump(2) << '\n';
  log << "wrote " << outcome.json_path << '\n';

  const auto& last = outcome.reports.back();
  if (last.counterexample) {
    const auto& cx = *last.counterexample;
    log << "  " << cx.quantity << (cx.time ? " at t=" + std::to_string(cx.time) : std::string()) << ": " << cx.before
        << " -> " << cx.after << " (" << cx.detail << ")\n";
    for (const auto& c : cx.changes)
      log << "  cell (" << c.row << ',' << c.arm << "): " << format_double(c.before) << " -> "
          << format_double(c.after) << '\n';
    log << "  replay: mabbias replay " << outcome.json_path << '\n';
    outcome.exit_code = 3;
  }
  return outcome;
}

int replay_file(const std::string& path, std::ostream& log) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + " is not valid JSON: " + e.what());
  }
  if (!j.contains("instance") || !j.contains("results")) throw ConfigError(path + " is not a check report");
  const auto inst = instance_from_json(j.at("instance"));
  for (const auto& r : j.at("results")) {
    if (!r.contains("counterexample")) continue;
    const auto property = parse_property(r.at("property").get<std::string>());
    const auto cx = counterexample_from_json(r.at("counterexample"));
    const auto result = replay(inst, property, cx);
    log << label(property) << ' ' << cx.quantity << ": recorded " << cx.before << " -> " << cx.after << ", replayed "
        << result.before << " -> " << result.after << (result.violated ? " (violation reproduced)" : " (no violation)")
        << '\n';
    return result.violated ? 3 : 0;
  }
  log << "no counterexample recorded in " << path << '\n';
  return 0;
}

}  // namespace mabbias
