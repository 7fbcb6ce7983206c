// Command-line front end for the online-control benchmark.
//
//   alice_bench run --config exp.json
//   alice_bench preset exp1 --seeds 100 --horizon 500 --out-dir out/exp1 --svg
//   alice_bench compare --run-dir out/exp1
//
// Exit codes: 0 success, 2 configuration error, 3 every rollout diverged.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "alice/bench.hpp"
#include "alice/config.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

int execute(const alice::ExperimentConfig& cfg) {
  const alice::RunResult run = alice::run_experiment(cfg);
  const auto files = alice::write_outputs(run, cfg.out_dir);
  std::cout << alice::format_compare(alice::compare(run));
  std::cout << "wrote " << files.size() << " files to " << cfg.out_dir << '\n';
  return run.all_diverged() ? kExitDiverged : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online LQ control benchmark: Alice vs LQR and trivial baselines"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment described by a JSON config");
  run_cmd->add_option("--config", config_path, "Path to the JSON config")->required();

  std::string preset_name;
  std::optional<std::int64_t> seeds, horizon;
  std::optional<std::uint64_t> base_seed;
  std::optional<std::string> out_dir;
  bool svg = false;
  auto* preset_cmd = app.add_subcommand("preset", "Run a built-in experiment preset");
  preset_cmd->add_option("name", preset_name, "exp1 | exp2 | exp3 | exp1_noiseless")->required();
  preset_cmd->add_option("--seeds", seeds, "Number of seeds");
  preset_cmd->add_option("--horizon", horizon, "Horizon T");
  preset_cmd->add_option("--base-seed", base_seed, "First seed");
  preset_cmd->add_option("--out-dir", out_dir, "Output directory");
  preset_cmd->add_flag("--svg", svg, "Also emit SVG plots");

  std::string run_dir;
  auto* compare_cmd = app.add_subcommand("compare", "Summarize a finished run directory");
  compare_cmd->add_option("--run-dir", run_dir, "Directory written by run/preset")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) return execute(alice::load_config(config_path));

    if (*preset_cmd) {
      alice::ExperimentConfig cfg = alice::preset(preset_name);
      if (base_seed) cfg.base_seed = *base_seed;
      if (seeds || base_seed) cfg.seeds = alice::seed_range(cfg.base_seed, seeds.value_or(static_cast<std::int64_t>(cfg.seeds.size())));
      if (horizon) {
        const bool constraint_off = cfg.alice.t_c == cfg.horizon;
        cfg.horizon = *horizon;
        cfg.alice.T = *horizon;
        if (constraint_off || cfg.alice.t_c > *horizon) cfg.alice.t_c = *horizon;
      }
      if (out_dir) cfg.out_dir = *out_dir;
      cfg.emit_svg = svg;
      cfg.validate();
      return execute(cfg);
    }

    if (*compare_cmd) {
      const alice::RunResult run = alice::load_run(run_dir);
      std::cout << alice::format_compare(alice::compare(run));
      return 0;
    }
  } catch (const alice::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
