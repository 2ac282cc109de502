#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mabbias/error.hpp"
#include "mabbias/experiment.hpp"

namespace {

using namespace mabbias;

bool is_preset(const std::string& name) {
  for (const auto& p : run_preset_names())
    if (p == name) return true;
  return false;
}

bool is_check_preset(const std::string& name) {
  for (const auto& p : check_preset_names())
    if (p == name) return true;
  return false;
}

ExperimentConfig resolve_config(const std::string& target) {
  if (is_preset(target)) return preset(target);
  if (std::filesystem::exists(target)) return load_config(target);
  throw ConfigError("not a preset or config file: " + target);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bias of sample statistics in adaptively collected bandit data"};
  app.require_subcommand(1);

  std::string target;
  std::optional<std::int64_t> reps;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> grid;
  std::optional<std::uint64_t> max_tables;
  bool plot = false;
  int threads = 1;
  std::int64_t dump_traces = 0;

  auto* run = app.add_subcommand("run", "Estimate marginal and conditional biases for a preset or config file");
  run->add_option("target", target, "Preset name or path to a JSON config")->required();
  run->add_option("--reps", reps, "Number of Monte Carlo repetitions")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Base seed");
  run->add_option("--out", out_dir, "Output directory (default $MABBIAS_OUT_DIR or ./mabbias-out)");
  run->add_flag("--plot", plot, "Also write an SVG of the conditional CDF curves");
  run->add_option("--grid", grid, "CDF grid as lo:hi:n");
  run->add_option("--threads", threads, "Worker threads; does not change the output")->check(CLI::PositiveNumber);
  run->add_option("--dump-traces", dump_traces, "Write per-pull traces of the first N trials")->check(CLI::NonNegativeNumber);

  auto* chk = app.add_subcommand("check", "Exhaustively verify monotonicity on a finite instance");
  chk->add_option("instance", target, "Check preset name")->required();
  chk->add_option("--max-tables", max_tables, "Size guard on the number of enumerated tables");
  chk->add_option("--out", out_dir, "Output directory for the JSON report");
  chk->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* describe = app.add_subcommand("describe", "Print a preset as JSON");
  describe->add_option("preset", target, "Run or check preset name")->required();

  auto* rep = app.add_subcommand("replay", "Re-run the counterexample stored in a check report");
  rep->add_option("report", target, "Path written by `check`")->required()->check(CLI::ExistingFile);

  app.add_subcommand("presets", "List preset names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      RunOverrides o;
      o.reps = reps;
      o.seed = seed;
      o.out_dir = out_dir;
      if (grid) o.grid = parse_grid(*grid);
      o.plot = plot;
      o.threads = threads;
      o.dump_traces = dump_traces;
      return run_experiment(resolve_config(target), o, std::cout).exit_code;
    }
    if (chk->parsed()) {
      if (!is_check_preset(target)) throw ConfigError("unknown check instance: " + target);
      return run_check(check_preset(target), max_tables, out_dir.value_or(default_output_dir()), threads, std::cout)
          .exit_code;
    }
    if (describe->parsed()) {
      if (is_check_preset(target)) {
        const auto p = check_preset(target);
        Json j;
        j["preset"] = p.name;
        j["summary"] = p.summary;
        j["instance"] = to_json(p.instance);
        Json props = Json::array();
        for (auto prop : p.properties) props.push_back(label(prop));
        j["properties"] = props;
        std::cout << j.dump(2) << '\n';
      } else {
        std::cout << to_json(preset(target)).dump(2) << '\n';
      }
      return 0;
    }
    if (rep->parsed()) return replay_file(target, std::cout);
    std::cout << "run presets:";
    for (const auto& p : run_preset_names()) std::cout << ' ' << p;
    std::cout << "\ncheck presets:";
    for (const auto& p : check_preset_names()) std::cout << ' ' << p;
    std::cout << '\n';
    return 0;
  } catch (const SizeGuardError& e) {
    std::cerr << "error: " << e.what() << " (raise --max-tables to override)\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 1;
}
