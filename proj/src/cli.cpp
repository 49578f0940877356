#include "msn/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "msn/config.hpp"
#include "msn/maze.hpp"
#include "msn/metrics.hpp"
#include "msn/network.hpp"
#include "msn/rng.hpp"

namespace msn::cli {

namespace fs = std::filesystem;

namespace {

// Creates the output directory when its parent already exists.
void ensure_output_dir(const std::string& dir) {
  const fs::path path(dir);
  if (fs::exists(path)) {
    if (!fs::is_directory(path))
      throw std::runtime_error("output path '" + dir + "' is not a directory");
    return;
  }
  const fs::path parent = path.parent_path();
  if (!parent.empty() && !fs::exists(parent))
    throw std::runtime_error("parent of output dir '" + dir + "' does not exist");
  fs::create_directory(path);
}

std::string emit_path(RunManifest& manifest, const std::string& name) {
  const std::string path = (fs::path(manifest.output_dir) / name).string();
  manifest.emitted_files.push_back(path);
  return path;
}

std::vector<double> default_threshold_grid() {
  std::vector<double> grid;
  grid.reserve(21);
  for (int i = 0; i <= 20; ++i) grid.push_back(static_cast<double>(i) / 20.0);
  return grid;
}

std::vector<std::uint64_t> default_seed_list() {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 20; ++s) seeds.push_back(s);
  return seeds;
}

SimFileConfig load_sim_config(const RunManifest& manifest) {
  SimFileConfig cfg;
  if (manifest.config_path) cfg = parse_sim_config(*manifest.config_path);
  if (manifest.seed_override) cfg.sim.seed = *manifest.seed_override;
  cfg.sim.validate();
  return cfg;
}

nlohmann::ordered_json report_to_json(const maze::MazeReport& report) {
  nlohmann::ordered_json agents = nlohmann::ordered_json::array();
  for (const maze::AgentReport& a : report.agents) {
    agents.push_back({{"id", a.id},
                      {"entry_step", a.entry_step},
                      {"steps_taken", a.steps_taken},
                      {"escaped", a.escaped}});
  }
  return {{"agents", agents}, {"escape_order", report.escape_order}};
}

// Global step at which an agent left the maze; one move per active turn.
int escape_step(const maze::AgentReport& agent) {
  return agent.entry_step + std::max(agent.steps_taken, 1) - 1;
}

}  // namespace

int cmd_sweep(RunManifest& manifest) {
  try {
    SimFileConfig cfg = load_sim_config(manifest);

    std::vector<double> thresholds =
        manifest.thresholds ? *manifest.thresholds : default_threshold_grid();
    std::vector<std::uint64_t> seeds;
    if (manifest.seed_list)
      seeds = *manifest.seed_list;
    else if (manifest.seed_override)
      seeds = {*manifest.seed_override};
    else
      seeds = default_seed_list();

    const FixedBaseline baseline{cfg.baseline_degree};
    SweepOptions options;
    options.time_average = manifest.time_average;

    const auto results =
        threshold_sweep(cfg.sim, thresholds, seeds, baseline, options);

    ensure_output_dir(manifest.output_dir);
    export_table(results, emit_path(manifest, "sweep.csv"));
    export_json(results, emit_path(manifest, "sweep.json"));

    if (const auto crossover = crossover_threshold(results))
      std::cout << "crossover_threshold = " << format_real(*crossover) << "\n";
    else
      std::cout << "no crossover: sweep curve never falls below baseline "
                << baseline.degree << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "sweep: " << e.what() << "\n";
    return 1;
  }
}

int cmd_run(RunManifest& manifest) {
  try {
    const SimFileConfig cfg = load_sim_config(manifest);

    Network net(cfg.sim);
    const RunTrace trace = run(net, cfg.sim.steps);

    ensure_output_dir(manifest.output_dir);
    {
      const std::string path = emit_path(manifest, "run.csv");
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot open '" + path + "'");
      out << "step,live,formed,expired,average_connections\n";
      const double m = static_cast<double>(cfg.sim.machine_count);
      for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const StepReport& s = trace.steps[i];
        out << (i + 1) << ',' << s.live << ',' << s.formed << ',' << s.expired
            << ',' << format_real(static_cast<double>(s.live) / m) << '\n';
      }
      if (!out) throw std::runtime_error("write failed for '" + path + "'");
    }
    {
      nlohmann::ordered_json summary = {
          {"machines", cfg.sim.machine_count},
          {"steps", cfg.sim.steps},
          {"seed", cfg.sim.seed},
          {"final_live_links", net.link_count()},
          {"final_average_connections", average_connections(net)},
          {"components", component_count(net)},
      };
      const std::string path = emit_path(manifest, "run.json");
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot open '" + path + "'");
      out << summary.dump(2) << '\n';
      if (!out) throw std::runtime_error("write failed for '" + path + "'");
    }

    std::cout << "run: " << cfg.sim.steps << " steps, "
              << net.link_count() << " live links, average_connections = "
              << format_real(average_connections(net)) << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "run: " << e.what() << "\n";
    return 1;
  }
}

int cmd_maze(RunManifest& manifest) {
  try {
    MazeScenarioConfig cfg;
    if (manifest.config_path) cfg = parse_maze_config(*manifest.config_path);
    if (manifest.maze_path) cfg.maze_path = *manifest.maze_path;
    if (manifest.seed_override) cfg.seed = *manifest.seed_override;
    if (cfg.maze_path.empty())
      throw std::runtime_error("no maze file given (use --maze or the 'maze' key)");

    const maze::MazeWorld world = maze::MazeWorld::load(cfg.maze_path);
    const int max_steps =
        cfg.max_steps > 0 ? cfg.max_steps : 4 * world.width * world.height;

    // Machine 1 explores from the entry; machine 2 starts at a seeded
    // random road cell elsewhere in the maze.
    maze::AgentState explorer;
    explorer.id = 1;
    explorer.position = world.entry;
    explorer.radio_range = cfg.radio_range;

    maze::AgentState partner = explorer;
    partner.id = 2;
    {
      std::vector<maze::Coord> candidates;
      for (int y = 0; y < world.height; ++y)
        for (int x = 0; x < world.width; ++x) {
          const maze::Coord c{x, y};
          if (world.is_road(c) && !(c == world.entry) && !(c == world.exit))
            candidates.push_back(c);
        }
      if (!candidates.empty()) {
        Rng rng(cfg.seed);
        partner.position = candidates[rng.below(candidates.size())];
      }
    }

    maze::MazeRunOptions solo_options;
    solo_options.sharing = false;
    maze::MazeRunOptions coop_options;
    coop_options.sharing = true;
    coop_options.exchange_cap = cfg.exchange_cap;

    maze::Archive no_archive(maze::ArchiveMode::non_archive);
    const maze::MazeReport solo =
        run_maze(world, {explorer, partner}, no_archive, max_steps, solo_options);
    const maze::MazeReport coop =
        run_maze(world, {explorer, partner}, no_archive, max_steps, coop_options);

    // Machine 3 arrives once both explorers have escaped and reads the
    // archived map before planning.
    int entry3 = 0;
    for (const maze::AgentReport& a : coop.agents)
      entry3 = std::max(entry3, escape_step(a) + 1);

    maze::AgentState reader;
    reader.id = 3;
    reader.position = world.entry;
    reader.radio_range = cfg.radio_range;
    reader.entry_step = entry3;

    maze::Archive archive(maze::ArchiveMode::archive);
    const maze::MazeReport with_archive =
        run_maze(world, {explorer, partner, reader}, archive,
                 entry3 + max_steps, coop_options);

    nlohmann::ordered_json report = {
        {"maze",
         {{"path", cfg.maze_path}, {"width", world.width}, {"height", world.height}}},
        {"seed", cfg.seed},
        {"solo", report_to_json(solo)},
        {"cooperative", report_to_json(coop)},
        {"cooperative_archive", report_to_json(with_archive)},
    };

    ensure_output_dir(manifest.output_dir);
    const std::string path = emit_path(manifest, "maze_report.json");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "'");
    out << report.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for '" + path + "'");

    for (const maze::AgentReport& a : with_archive.agents)
      std::cout << "machine " << a.id << ": entry_step " << a.entry_step
                << ", steps " << a.steps_taken
                << (a.escaped ? "" : " (did not escape)") << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "maze: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace msn::cli
