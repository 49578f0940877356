#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "msn/network.hpp"

// Flat key = value configuration files: one assignment per line, '#'
// comments, unknown keys rejected. Unset keys take the documented
// defaults, so an empty file is a valid full configuration.

namespace msn {

/// Simulation config plus the sweep-only baseline degree.
struct SimFileConfig {
  SimConfig sim;
  int baseline_degree = 50;
};

struct MazeScenarioConfig {
  std::string maze_path;
  int radio_range = 2;
  int max_steps = 0;  // 0 = derived from maze size (4 * width * height)
  std::uint64_t seed = 1;
  std::optional<int> exchange_cap;  // unset = unlimited
};

SimFileConfig parse_sim_config(const std::string& path);
MazeScenarioConfig parse_maze_config(const std::string& path);

}  // namespace msn
