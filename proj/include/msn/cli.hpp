#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Command layer behind the msn binary. Each command reads its
// configuration, runs the experiment, writes the artifacts into the
// output directory and returns a process exit status. Kept out of main()
// so the commands can be driven directly by tests.

namespace msn::cli {

enum class Command { sweep, run, maze };

struct RunManifest {
  Command command = Command::sweep;
  std::optional<std::string> config_path;
  std::string output_dir = ".";
  std::optional<std::uint64_t> seed_override;
  std::optional<std::vector<double>> thresholds;        // sweep only
  std::optional<std::vector<std::uint64_t>> seed_list;  // sweep only
  bool time_average = true;
  std::optional<std::string> maze_path;  // maze only
  std::vector<std::string> emitted_files;
};

/// Threshold sweep against the fixed baseline; writes sweep.csv and
/// sweep.json and prints the crossover threshold if one exists.
int cmd_sweep(RunManifest& manifest);

/// Single simulation run; writes the per-step trace run.csv and a
/// run.json summary.
int cmd_run(RunManifest& manifest);

/// The cooperative maze scenario: solo, cooperative, and
/// cooperative-plus-archive runs of the same maze and seed; writes
/// maze_report.json.
int cmd_maze(RunManifest& manifest);

}  // namespace msn::cli
