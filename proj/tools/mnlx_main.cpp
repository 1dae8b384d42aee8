// Command-line front end: instance construction for the named experiment
// families, experiment execution, and machine-readable outputs.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mnlx/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Optimal exploration policies for capacity-constrained MNL assortments"};
  app.require_subcommand(1);

  double example_w0 = 1.0;
  auto* example = app.add_subcommand("example", "Check the worked fictitious-assortment example");
  example->add_option("--w0", example_w0, "Outside-option weight (perturb to self-test)");

  std::string config_path;
  std::uint64_t seed = 0;
  long reps = 10000;
  long horizon_cap = mnlx::kDefaultHorizonCap;
  std::string out_path;
  int threads = 1;
  bool fixed_timing = false;
  auto* run = app.add_subcommand("run", "Run experiments from a JSON config");
  run->add_option("--config", config_path, "Config path")->required();
  auto* run_seed = run->add_option("--seed", seed, "Master seed override");
  auto* run_reps = run->add_option("--reps", reps, "Replication override");
  auto* run_cap = run->add_option("--horizon-cap", horizon_cap, "Horizon cap override");
  auto* run_out = run->add_option("--out", out_path, "Output CSV path override");
  auto* run_threads = run->add_option("--threads", threads, "Worker thread override");
  run->add_flag("--fixed-timing", fixed_timing, "Zero the wall_ms column for reproducible bytes");

  auto* baselines = app.add_subcommand("baselines", "Canned over/under-exploration suite");
  baselines->add_option("--seed", seed, "Master seed");
  baselines->add_option("--reps", reps, "Replications per estimate");
  baselines->add_option("--threads", threads, "Worker threads");

  double mu = 0.7, p1 = 0.1, w3 = 5.0, w4 = 2.5;
  int grid = 19;
  auto* hetero = app.add_subcommand("hetero", "Two-entrant heterogeneous-prior threshold sweep");
  hetero->add_option("--mu", mu, "Common prior mean");
  hetero->add_option("--p1", p1, "Entrant 1 upside probability");
  hetero->add_option("--w3", w3, "Top incumbent weight");
  hetero->add_option("--w4", w4, "Second incumbent weight");
  hetero->add_option("--grid", grid, "Grid points over (0, p1)");

  long noisy_reps = 10000;
  auto* noisy = app.add_subcommand("noisy", "Noisy-review pairing comparison");
  noisy->add_option("--seed", seed, "Master seed");
  noisy->add_option("--reps", noisy_reps, "Paired episodes per arm");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (example->parsed()) return mnlx::cmd_example(example_w0);
    if (run->parsed()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "config error: cannot open " << config_path << "\n";
        return 2;
      }
      mnlx::json j;
      try {
        in >> j;
      } catch (const mnlx::json::parse_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
      }
      mnlx::ExperimentConfig cfg = mnlx::config_from_json(j);
      if (*run_seed) cfg.master_seed = seed;
      if (*run_reps) cfg.reps = reps;
      if (*run_cap) cfg.horizon_cap = horizon_cap;
      if (*run_out) cfg.out = out_path;
      if (*run_threads) cfg.threads = threads;
      return mnlx::cmd_run(cfg, fixed_timing);
    }
    if (baselines->parsed()) return mnlx::cmd_baselines(seed, reps, threads);
    if (hetero->parsed()) return mnlx::cmd_hetero(mu, p1, w3, w4, grid);
    if (noisy->parsed()) return mnlx::cmd_noisy(seed, noisy_reps);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
