#include <CLI11.hpp>

#include "msn/cli.hpp"

// msn: machine social network simulator.
//   msn sweep  - connection-threshold sweep against the fixed baseline
//   msn run    - single simulation run with a per-step trace
//   msn maze   - cooperative maze scenario (solo / shared / archive)

int main(int argc, char** argv) {
  CLI::App app{"Machine social network simulator"};
  app.require_subcommand(1);

  msn::cli::RunManifest manifest;
  std::string config_path;
  std::string maze_path;
  std::uint64_t seed = 0;
  std::vector<double> thresholds;
  std::vector<std::uint64_t> seeds;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Configuration file (key = value lines)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", manifest.output_dir,
                    "Output directory for emitted files (default: .)");
    cmd->add_option("--seed", seed, "Override the configured seed");
  };

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run the connection-threshold sweep and export sweep.csv/json");
  add_common(sweep);
  sweep->add_option("--thresholds", thresholds,
                    "Comma-separated threshold grid (default 0.00..1.00 step 0.05)")
      ->delimiter(',');
  sweep->add_option("--seeds", seeds,
                    "Comma-separated replica seeds (default 1..20)")
      ->delimiter(',');
  sweep->add_flag("--time-average,!--end-of-horizon", manifest.time_average,
                  "Average the final half of the horizon (default) or, with "
                  "--end-of-horizon, take the raw end-of-horizon sample");

  CLI::App* run = app.add_subcommand(
      "run", "Run a single simulation and export run.csv/json");
  add_common(run);

  CLI::App* maze = app.add_subcommand(
      "maze", "Run the cooperative maze scenario and export maze_report.json");
  add_common(maze);
  maze->add_option("--maze", maze_path, "Maze file (overrides the config key)")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  if (!config_path.empty()) manifest.config_path = config_path;
  if (!maze_path.empty()) manifest.maze_path = maze_path;
  if (sweep->count("--seed") || run->count("--seed") || maze->count("--seed"))
    manifest.seed_override = seed;
  if (!thresholds.empty()) manifest.thresholds = thresholds;
  if (!seeds.empty()) manifest.seed_list = seeds;

  if (sweep->parsed()) {
    manifest.command = msn::cli::Command::sweep;
    return msn::cli::cmd_sweep(manifest);
  }
  if (run->parsed()) {
    manifest.command = msn::cli::Command::run;
    return msn::cli::cmd_run(manifest);
  }
  manifest.command = msn::cli::Command::maze;
  return msn::cli::cmd_maze(manifest);
}
