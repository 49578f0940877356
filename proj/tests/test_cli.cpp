#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "msn/cli.hpp"
#include "msn/config.hpp"

using namespace msn;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "msn_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path path = scratch_dir() / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  return path.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fresh_out_dir(const std::string& name) {
  const fs::path dir = scratch_dir() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("an empty config yields the documented defaults") {
  const std::string path = write_file("empty.cfg", "");
  const SimFileConfig cfg = parse_sim_config(path);
  CHECK(cfg.sim.machine_count == 100);
  CHECK(cfg.sim.subspace_count == 10);
  CHECK(cfg.sim.interest_universe == 10);
  CHECK(cfg.sim.interests_per_machine == 5);
  CHECK(cfg.sim.weights.interest == doctest::Approx(1.0 / 3.0));
  CHECK(cfg.sim.decay.a == 0.1);
  CHECK(cfg.sim.decay.threshold == 0.45);
  CHECK(cfg.sim.visibility == VisibilityMode::infrastructure);
  CHECK(cfg.sim.churn.p_move == 0.05);
  CHECK(cfg.sim.churn.p_interest == 0.05);
  CHECK(cfg.sim.steps == 200);
  CHECK(cfg.sim.seed == 1);
  CHECK_FALSE(cfg.sim.decay_scaled);
  CHECK(cfg.sim.refractory == 0);
  CHECK(cfg.baseline_degree == 50);
}

TEST_CASE("config keys override defaults with comments ignored") {
  const std::string path = write_file("full.cfg",
                                      "# sweep setup\n"
                                      "machines = 40\n"
                                      "subspaces = 5\n"
                                      "w_interest = 0.5   # heavier interests\n"
                                      "w_spatial = 0.25\n"
                                      "w_neighbor = 0.25\n"
                                      "visibility = adhoc\n"
                                      "adhoc_range = 2\n"
                                      "decay_scaled = true\n"
                                      "seed = 99\n"
                                      "baseline_degree = 12\n");
  const SimFileConfig cfg = parse_sim_config(path);
  CHECK(cfg.sim.machine_count == 40);
  CHECK(cfg.sim.subspace_count == 5);
  CHECK(cfg.sim.weights.interest == 0.5);
  CHECK(cfg.sim.visibility == VisibilityMode::adhoc);
  CHECK(cfg.sim.adhoc_range == 2);
  CHECK(cfg.sim.decay_scaled);
  CHECK(cfg.sim.seed == 99);
  CHECK(cfg.baseline_degree == 12);
}

TEST_CASE("config validation names the violated invariant") {
  const std::string path = write_file("badweights.cfg",
                                      "w_interest = 0.5\n"
                                      "w_spatial = 0.3\n"
                                      "w_neighbor = 0.1\n");
  CHECK_THROWS_WITH_AS(parse_sim_config(path),
                       "Weights: w_I + w_D + w_N must equal 1",
                       std::invalid_argument);
}

TEST_CASE("unknown keys and malformed lines are rejected with context") {
  const std::string unknown = write_file("unknown.cfg", "machine_total = 5\n");
  try {
    parse_sim_config(unknown);
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    CHECK(what.find("unknown key 'machine_total'") != std::string::npos);
    CHECK(what.find(":1") != std::string::npos);
  }

  const std::string noval = write_file("noval.cfg", "\n\nmachines\n");
  try {
    parse_sim_config(noval);
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }

  const std::string badnum = write_file("badnum.cfg", "machines = lots\n");
  CHECK_THROWS_AS(parse_sim_config(badnum), std::invalid_argument);
  CHECK_THROWS_AS(parse_sim_config("/nonexistent/path.cfg"), std::runtime_error);
}

TEST_CASE("maze config parses its own key set strictly") {
  const std::string path = write_file("maze.cfg",
                                      "maze = data/maze_9x9.txt\n"
                                      "radio_range = 3\n"
                                      "max_steps = 500\n"
                                      "exchange_cap = 40\n");
  const MazeScenarioConfig cfg = parse_maze_config(path);
  CHECK(cfg.maze_path == "data/maze_9x9.txt");
  CHECK(cfg.radio_range == 3);
  CHECK(cfg.max_steps == 500);
  REQUIRE(cfg.exchange_cap.has_value());
  CHECK(*cfg.exchange_cap == 40);

  const std::string bad = write_file("mazebad.cfg", "machines = 100\n");
  CHECK_THROWS_AS(parse_maze_config(bad), std::invalid_argument);
}

TEST_CASE("cmd_sweep writes schema-valid artifacts and reports status") {
  cli::RunManifest manifest;
  manifest.command = cli::Command::sweep;
  manifest.output_dir = fresh_out_dir("sweep_out");
  manifest.thresholds = std::vector<double>{0.0, 0.5, 1.0};
  manifest.seed_list = std::vector<std::uint64_t>{1, 2};
  manifest.config_path = write_file("sweep.cfg", "machines = 30\nsteps = 40\nbaseline_degree = 15\n");

  REQUIRE(cli::cmd_sweep(manifest) == 0);
  REQUIRE(manifest.emitted_files.size() == 2);

  const std::string csv = slurp(manifest.emitted_files[0]);
  CHECK(csv.rfind("c_th,mean_connections,std_connections,seeds,baseline_connections\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows

  const auto parsed = nlohmann::json::parse(slurp(manifest.emitted_files[1]));
  REQUIRE(parsed.is_array());
  CHECK(parsed.size() == 3);
  CHECK(parsed[0]["c_th"].get<double>() == 0.0);
  CHECK(parsed[0]["mean_connections"].get<double>() == 29.0);
  CHECK(parsed[2]["mean_connections"].get<double>() < 1.0);
}

TEST_CASE("cmd_sweep defaults to 21 thresholds and 20 seeds") {
  cli::RunManifest manifest;
  manifest.output_dir = fresh_out_dir("sweep_defaults");
  manifest.config_path =
      write_file("grid.cfg", "machines = 10\nsteps = 3\nbaseline_degree = 5\n");
  REQUIRE(cli::cmd_sweep(manifest) == 0);

  const std::string csv = slurp(manifest.emitted_files[0]);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 22);  // header + 21 rows
  const auto parsed = nlohmann::json::parse(slurp(manifest.emitted_files[1]));
  REQUIRE(parsed.size() == 21);
  CHECK(parsed[0]["c_th"].get<double>() == 0.0);
  CHECK(parsed[20]["c_th"].get<double>() == 1.0);
  for (const auto& row : parsed) CHECK(row["seeds"].get<int>() == 20);
}

TEST_CASE("cmd_sweep creates the output dir only under an existing parent") {
  cli::RunManifest manifest;
  manifest.output_dir = (fs::path(fresh_out_dir("mk")) / "fresh").string();
  manifest.thresholds = std::vector<double>{0.5};
  manifest.seed_list = std::vector<std::uint64_t>{1};
  manifest.config_path = write_file("tiny.cfg", "machines = 10\nsteps = 5\nbaseline_degree = 5\n");
  CHECK(cli::cmd_sweep(manifest) == 0);
  CHECK(fs::exists(fs::path(manifest.output_dir) / "sweep.csv"));

  cli::RunManifest deep;
  deep.output_dir = "/nonexistent_parent/msn_out";
  deep.thresholds = std::vector<double>{0.5};
  deep.seed_list = std::vector<std::uint64_t>{1};
  CHECK(cli::cmd_sweep(deep) == 1);
}

TEST_CASE("cmd_run emits a per-step trace and a summary") {
  cli::RunManifest manifest;
  manifest.command = cli::Command::run;
  manifest.output_dir = fresh_out_dir("run_out");
  manifest.config_path = write_file("run.cfg", "machines = 25\nsteps = 30\n");
  manifest.seed_override = 7;

  REQUIRE(cli::cmd_run(manifest) == 0);
  const std::string csv = slurp(manifest.emitted_files[0]);
  CHECK(csv.rfind("step,live,formed,expired,average_connections\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 31);

  const auto summary = nlohmann::json::parse(slurp(manifest.emitted_files[1]));
  CHECK(summary["machines"].get<int>() == 25);
  CHECK(summary["steps"].get<int>() == 30);
  CHECK(summary["seed"].get<std::uint64_t>() == 7);
  CHECK(summary["final_live_links"].get<int>() >= 0);
  CHECK(summary["components"].get<int>() >= 1);
}

TEST_CASE("cmd_maze runs the three scenario configurations") {
  cli::RunManifest manifest;
  manifest.command = cli::Command::maze;
  manifest.output_dir = fresh_out_dir("maze_out");
  manifest.maze_path = std::string(MSN_DATA_DIR) + "/maze_9x9.txt";
  manifest.seed_override = 7;

  REQUIRE(cli::cmd_maze(manifest) == 0);
  const auto report = nlohmann::json::parse(slurp(manifest.emitted_files[0]));
  REQUIRE(report.contains("solo"));
  REQUIRE(report.contains("cooperative"));
  REQUIRE(report.contains("cooperative_archive"));

  const auto& solo = report["solo"]["agents"];
  const auto& coop = report["cooperative"]["agents"];
  const auto& arch = report["cooperative_archive"]["agents"];
  REQUIRE(solo.size() == 2);
  REQUIRE(coop.size() == 2);
  REQUIRE(arch.size() == 3);
  for (const auto& a : arch) CHECK(a["escaped"].get<bool>());

  // Archive reader <= cooperative entry-explorer <= solo entry-explorer.
  const int solo_steps = solo[0]["steps_taken"].get<int>();
  const int coop_steps = coop[0]["steps_taken"].get<int>();
  const int reader_steps = arch[2]["steps_taken"].get<int>();
  CHECK(coop_steps <= solo_steps);
  CHECK(reader_steps <= coop_steps);
  CHECK(arch[2]["entry_step"].get<int>() > 0);
}

TEST_CASE("cmd_maze fails cleanly on invalid mazes") {
  cli::RunManifest manifest;
  manifest.output_dir = fresh_out_dir("maze_bad");
  manifest.maze_path = write_file("bad_maze.txt", "3 1\nS#E\n");
  CHECK(cli::cmd_maze(manifest) == 1);

  cli::RunManifest missing;
  missing.output_dir = manifest.output_dir;
  CHECK(cli::cmd_maze(missing) == 1);
}

TEST_CASE("repeat commands are byte-identical") {
  auto run_once = [&](const std::string& dir) {
    cli::RunManifest manifest;
    manifest.output_dir = fresh_out_dir(dir);
    manifest.maze_path = std::string(MSN_DATA_DIR) + "/maze_9x9.txt";
    manifest.seed_override = 7;
    REQUIRE(cli::cmd_maze(manifest) == 0);
    return slurp(manifest.emitted_files[0]);
  };
  CHECK(run_once("det_a") == run_once("det_b"));

  auto sweep_once = [&](const std::string& dir) {
    cli::RunManifest manifest;
    manifest.output_dir = fresh_out_dir(dir);
    manifest.thresholds = std::vector<double>{0.2, 0.6};
    manifest.seed_list = std::vector<std::uint64_t>{3, 4};
    manifest.config_path = write_file("det.cfg", "machines = 20\nsteps = 25\nbaseline_degree = 10\n");
    REQUIRE(cli::cmd_sweep(manifest) == 0);
    return slurp(manifest.emitted_files[0]) + slurp(manifest.emitted_files[1]);
  };
  CHECK(sweep_once("det_c") == sweep_once("det_d"));
}
