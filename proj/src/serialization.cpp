#include "mabbias/serialization.hpp"

#include <cmath>
#include <fstream>

#include "mabbias/error.hpp"

namespace mabbias {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

template <class T>
T get(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad field \"") + key + "\": " + e.what());
  }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get<T>(j, key);
}

std::string type_of(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  return get<std::string>(j, "kind");
}

// JSON has no infinities; non-finite numbers become strings.
Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Json numbers(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

}  // namespace

Json to_json(const ArmSpec& arm) {
  return std::visit(overloaded{
                        [](const NormalArm& a) -> Json {
                          return {{"kind", "normal"}, {"mean", a.mean}, {"variance", a.variance}};
                        },
                        [](const BernoulliArm& a) -> Json { return {{"kind", "bernoulli"}, {"p", a.p}}; },
                        [](const DiscreteArm& a) -> Json {
                          return {{"kind", "discrete"}, {"support", a.support}, {"probs", a.probs}};
                        },
                    },
                    arm.kind());
}

ArmSpec arm_from_json(const Json& j) {
  const auto dist = get<std::string>(j, "kind");
  try {
    if (dist == "normal") return ArmSpec::normal(get<double>(j, "mean"), get_or<double>(j, "variance", 1.0));
    if (dist == "bernoulli") return ArmSpec::bernoulli(get<double>(j, "p"));
    if (dist == "discrete") {
      auto support = get<std::vector<double>>(j, "support");
      if (!j.contains("probs")) return ArmSpec::uniform_over(std::move(support));
      return ArmSpec::discrete(std::move(support), get<std::vector<double>>(j, "probs"));
    }
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("invalid arm: ") + e.what());
  }
  throw ConfigError("unknown arm kind: " + dist);
}

Json to_json(const SamplingRule& rule) {
  return std::visit(overloaded{
                        [](const sampling::AlternateTwoArms&) -> Json { return {{"kind", "alternate_two_arms"}}; },
                        [](const sampling::SingleArm&) -> Json { return {{"kind", "single_arm"}}; },
                        [](const sampling::RoundRobin& r) -> Json { return {{"kind", "round_robin"}, {"arms", r.arms}}; },
                        [](const sampling::LilUcb& r) -> Json {
                          return {{"kind", "lil_ucb"},
                                  {"beta", r.beta},
                                  {"epsilon", r.epsilon},
                                  {"delta", r.delta},
                                  {"sigma2", r.sigma2}};
                        },
                        [](const sampling::LowestMean&) -> Json { return {{"kind", "lowest_mean"}}; },
                    },
                    rule);
}

SamplingRule sampling_from_json(const Json& j) {
  const auto type = type_of(j);
  if (type == "alternate_two_arms") return sampling::AlternateTwoArms{};
  if (type == "single_arm") return sampling::SingleArm{};
  if (type == "round_robin") return sampling::RoundRobin{get<int>(j, "arms")};
  if (type == "lil_ucb") {
    sampling::LilUcb r;
    r.beta = get_or(j, "beta", r.beta);
    r.epsilon = get_or(j, "epsilon", r.epsilon);
    r.delta = get_or(j, "delta", r.delta);
    r.sigma2 = get_or(j, "sigma2", r.sigma2);
    return r;
  }
  if (type == "lowest_mean") return sampling::LowestMean{};
  throw ConfigError("unknown sampling rule: " + type);
}

Json to_json(const StoppingRule& rule) {
  return std::visit(overloaded{
                        [](const stopping::FixedTime& r) -> Json { return {{"kind", "fixed_time"}, {"M", r.max_time}}; },
                        [](const stopping::UpperBoundary& r) -> Json {
                          return {{"kind", "upper_boundary"}, {"alpha", r.alpha}, {"min_time", r.min_time}};
                        },
                        [](const stopping::TwoSidedEven& r) -> Json { return {{"kind", "two_sided_even"}, {"alpha", r.alpha}}; },
                        [](const stopping::CountDominance& r) -> Json {
                          return {{"kind", "count_dominance"}, {"lambda", r.lambda}};
                        },
                        [](const stopping::MinOf& r) -> Json {
                          Json list = Json::array();
                          for (const auto& sub : r.rules) list.push_back(to_json(sub));
                          return {{"kind", "min_of"}, {"rules", list}};
                        },
                    },
                    rule.kind);
}

StoppingRule stopping_from_json(const Json& j) {
  const auto type = type_of(j);
  if (type == "fixed_time") return stopping::FixedTime{get<std::int64_t>(j, "M")};
  if (type == "upper_boundary")
    return stopping::UpperBoundary{get<double>(j, "alpha"), get_or<std::int64_t>(j, "min_time", 1)};
  if (type == "two_sided_even") return stopping::TwoSidedEven{get<double>(j, "alpha")};
  if (type == "count_dominance") return stopping::CountDominance{get_or(j, "lambda", 1.0)};
  if (type == "min_of") {
    stopping::MinOf r;
    const auto& list = field(j, "rules");
    if (!list.is_array() || list.empty()) throw ConfigError("min_of needs a non-empty \"rules\" array");
    for (const auto& sub : list) r.rules.push_back(stopping_from_json(sub));
    return r;
  }
  throw ConfigError("unknown stopping rule: " + type);
}

Json to_json(const ChoosingRule& rule) {
  return std::visit(overloaded{
                        [](const choosing::ArgmaxMean&) -> Json { return {{"kind", "argmax_mean"}}; },
                        [](const choosing::ArgmaxCount&) -> Json { return {{"kind", "argmax_count"}}; },
                        [](const choosing::Fixed& r) -> Json { return {{"kind", "fixed"}, {"arm", r.arm}}; },
                        [](const choosing::ArgminMean&) -> Json { return {{"kind", "argmin_mean"}}; },
                    },
                    rule);
}

ChoosingRule choosing_from_json(const Json& j) {
  const auto type = type_of(j);
  if (type == "argmax_mean") return choosing::ArgmaxMean{};
  if (type == "argmax_count") return choosing::ArgmaxCount{};
  if (type == "fixed") return choosing::Fixed{get_or(j, "arm", 1)};
  if (type == "argmin_mean") return choosing::ArgminMean{};
  throw ConfigError("unknown choosing rule: " + type);
}

Json to_json(const FunctionalSpec& f) {
  return std::visit(overloaded{
                        [](const functional::Mean&) -> Json { return "mean"; },
                        [](const functional::Variance&) -> Json { return "variance"; },
                        [](const functional::Median&) -> Json { return "median"; },
                        [](const functional::IndicatorAt& i) -> Json { return {{"kind", "indicator"}, {"y", i.y}}; },
                        [](const functional::CustomMonotone& c) -> Json {
                          return {{"kind", "custom_monotone"}, {"x", c.x}, {"f", c.f}};
                        },
                    },
                    f.kind());
}

FunctionalSpec functional_from_json(const Json& j) {
  const auto type = type_of(j);
  if (type == "mean") return FunctionalSpec::mean();
  if (type == "variance") return FunctionalSpec::variance();
  if (type == "median") return FunctionalSpec::median();
  if (type == "indicator") return FunctionalSpec::indicator_at(get<double>(j, "y"));
  if (type == "custom_monotone") {
    try {
      return FunctionalSpec::custom_monotone(get<std::vector<double>>(j, "x"), get<std::vector<double>>(j, "f"));
    } catch (const ArgumentError& e) {
      throw ConfigError(std::string("invalid custom functional: ") + e.what());
    }
  }
  throw ConfigError("unknown functional: " + type);
}

namespace {

Json algorithm_json(const Algorithm& algorithm) {
  if (const auto* h = std::get_if<HalvingSpec>(&algorithm)) return {{"budget", h->budget}};
  const auto& r = std::get<RuleSet>(algorithm);
  return {{"sampling", to_json(r.sampling)}, {"stopping", to_json(r.stopping)}, {"choosing", to_json(r.choosing)}};
}

Algorithm algorithm_from(const Json& j) {
  const bool rules = j.contains("rules");
  const bool halving = j.contains("halving");
  if (rules == halving) throw ConfigError("exactly one of \"rules\" and \"halving\" is required");
  if (halving) return HalvingSpec{get<std::int64_t>(j.at("halving"), "budget")};
  const auto& r = j.at("rules");
  return RuleSet{sampling_from_json(field(r, "sampling")), stopping_from_json(field(r, "stopping")),
                 choosing_from_json(field(r, "choosing"))};
}

void put_algorithm(Json& j, const Algorithm& algorithm) {
  j[std::holds_alternative<HalvingSpec>(algorithm) ? "halving" : "rules"] = algorithm_json(algorithm);
}

std::vector<std::vector<double>> table_from(const Json& j) {
  try {
    return j.get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad table: ") + e.what());
  }
}

}  // namespace

Json to_json(const ExperimentConfig& config) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = config.name;
  Json arms = Json::array();
  for (const auto& a : config.design.arms) arms.push_back(to_json(a));
  j["arms"] = arms;
  put_algorithm(j, config.design.algorithm);
  Json conditions = Json::array();
  for (const auto& c : config.options.conditions) conditions.push_back(c.label());
  j["conditions"] = conditions;
  Json functionals = Json::array();
  for (const auto& f : config.options.functionals) functionals.push_back(to_json(f));
  j["functionals"] = functionals;
  const auto& g = config.options.grid.points();
  j["grid"] = {{"lo", g.front()}, {"hi", g.back()}, {"n", g.size()}};
  j["reps"] = config.options.reps;
  j["seed"] = config.options.base_seed;
  j["horizon_cap"] = config.design.horizon_cap;
  if (!config.output_dir.empty()) j["output_dir"] = config.output_dir;
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  const auto version = get<int>(j, "schema_version");
  if (version != kSchemaVersion) throw ConfigError("unsupported schema_version " + std::to_string(version));
  ExperimentConfig c;
  c.name = get_or<std::string>(j, "name", "custom");
  const auto& arms = field(j, "arms");
  if (!arms.is_array() || arms.empty()) throw ConfigError("\"arms\" must be a non-empty array");
  for (const auto& a : arms) c.design.arms.push_back(arm_from_json(a));
  c.design.algorithm = algorithm_from(j);
  c.design.horizon_cap = get_or<std::int64_t>(j, "horizon_cap", c.design.horizon_cap);
  const auto& conditions = field(j, "conditions");
  if (!conditions.is_array()) throw ConfigError("\"conditions\" must be an array");
  try {
    for (const auto& cond : conditions) c.options.conditions.push_back(ConditionSpec::parse(cond.get<std::string>()));
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad condition: ") + e.what());
  }
  if (j.contains("functionals")) {
    c.options.functionals.clear();
    for (const auto& f : j.at("functionals")) c.options.functionals.push_back(functional_from_json(f));
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    try {
      c.options.grid = CdfGrid::equispaced(get<double>(g, "lo"), get<double>(g, "hi"), get<std::size_t>(g, "n"));
    } catch (const ArgumentError& e) {
      throw ConfigError(std::string("invalid grid: ") + e.what());
    }
  }
  c.options.reps = get_or<std::int64_t>(j, "reps", c.options.reps);
  c.options.base_seed = get_or<std::uint64_t>(j, "seed", c.options.base_seed);
  c.output_dir = get_or<std::string>(j, "output_dir", "");
  if (c.options.reps < 1) throw ConfigError("reps must be positive");
  if (c.design.horizon_cap < 1) throw ConfigError("horizon_cap must be positive");
  if (const auto* rules = std::get_if<RuleSet>(&c.design.algorithm)) {
    try {
      validate(*rules, static_cast<int>(c.design.arms.size()));
    } catch (const ArgumentError& e) {
      throw ConfigError(e.what());
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

Json to_json(const BiasReport& report) {
  Json j;
  j["total_reps"] = report.total_reps;
  j["completed"] = report.completed;
  j["truncated"] = report.truncated;
  j["seed"] = report.seed;
  j["z"] = report.z;
  j["grid"] = numbers(report.grid.points());
  Json conditions = Json::array();
  for (const auto& cs : report.conditions) {
    Json c;
    c["condition"] = cs.condition.label();
    c["n"] = cs.n;
    c["probability"] = cs.probability;
    c["empty"] = cs.empty();
    Json arms = Json::array();
    for (const auto& as : cs.arms) {
      Json a;
      a["arm"] = as.arm;
      Json stats = Json::array();
      for (const auto& s : as.statistics)
        stats.push_back({{"statistic", s.name},
                         {"estimate", number(s.estimate)},
                         {"reference", number(s.reference)},
                         {"bias", number(s.bias)},
                         {"se", number(s.se)},
                         {"verdict", label(s.verdict)},
                         {"n", s.n}});
      a["statistics"] = stats;
      a["cdf"] = {{"n", as.cdf.n},
                  {"estimate", numbers(as.cdf.estimate)},
                  {"reference", numbers(as.cdf.reference)},
                  {"bias", numbers(as.cdf.bias)},
                  {"se", numbers(as.cdf.se)},
                  {"min_bias", number(as.cdf.bias.empty() ? 0.0 : as.cdf.min_bias())},
                  {"max_bias", number(as.cdf.bias.empty() ? 0.0 : as.cdf.max_bias())},
                  {"above_truth_within_z", as.cdf.above_truth_within(report.z)},
                  {"below_truth_within_z", as.cdf.below_truth_within(report.z)}};
      arms.push_back(a);
    }
    c["arms"] = arms;
    conditions.push_back(c);
  }
  j["conditions"] = conditions;
  return j;
}

Json to_json(const FiniteInstance& inst) {
  Json j;
  j["supports"] = inst.supports;
  j["horizon"] = inst.horizon;
  put_algorithm(j, inst.algorithm);
  if (inst.target_arm) j["target_arm"] = *inst.target_arm;
  j["condition"] = inst.condition.label();
  j["randomness_seeds"] = inst.randomness_seeds;
  j["max_tables"] = inst.max_tables;
  j["table_seed"] = inst.table_seed;
  return j;
}

FiniteInstance instance_from_json(const Json& j) {
  FiniteInstance inst;
  inst.supports = table_from(field(j, "supports"));
  inst.horizon = get<std::int64_t>(j, "horizon");
  inst.algorithm = algorithm_from(j);
  if (j.contains("target_arm")) inst.target_arm = get<int>(j, "target_arm");
  try {
    inst.condition = ConditionSpec::parse(get_or<std::string>(j, "condition", "marginal"));
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  inst.randomness_seeds = get_or(j, "randomness_seeds", inst.randomness_seeds);
  inst.max_tables = get_or(j, "max_tables", inst.max_tables);
  inst.table_seed = get_or(j, "table_seed", inst.table_seed);
  return inst;
}

Json to_json(const Counterexample& cx) {
  Json changes = Json::array();
  for (const auto& c : cx.changes)
    changes.push_back({{"row", c.row}, {"arm", c.arm}, {"before", c.before}, {"after", c.after}});
  return {{"table", cx.table},         {"changes", changes},   {"randomness_seed", cx.randomness_seed},
          {"quantity", cx.quantity},   {"quantity_arm", cx.quantity_arm}, {"before", cx.before},
          {"after", cx.after},         {"time", cx.time},      {"detail", cx.detail}};
}

Counterexample counterexample_from_json(const Json& j) {
  Counterexample cx;
  cx.table = table_from(field(j, "table"));
  for (const auto& c : field(j, "changes"))
    cx.changes.push_back({get<std::int64_t>(c, "row"), get<int>(c, "arm"), get<double>(c, "before"),
                          get<double>(c, "after")});
  cx.randomness_seed = get_or<std::uint64_t>(j, "randomness_seed", 0);
  cx.quantity = get_or<std::string>(j, "quantity", "");
  cx.quantity_arm = get_or(j, "quantity_arm", 1);
  cx.before = get_or<std::string>(j, "before", "");
  cx.after = get_or<std::string>(j, "after", "");
  cx.time = get_or<std::int64_t>(j, "time", 0);
  cx.detail = get_or<std::string>(j, "detail", "");
  return cx;
}

Json to_json(const MonotonicityReport& report) {
  Json j;
  j["property"] = label(report.property);
  j["verdict"] = report.pass ? "pass" : "counterexample";
  j["tables_checked"] = report.tables_checked;
  j["comparisons"] = report.comparisons;
  j["skipped_truncated"] = report.skipped_truncated;
  j["skipped_unsampled"] = report.skipped_unsampled;
  if (report.counterexample) j["counterexample"] = to_json(*report.counterexample);
  return j;
}

}  // namespace mabbias
