#include "msn/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace msn {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
T parse_number(const std::string& text, const std::string& context) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last)
    throw std::invalid_argument(context + ": invalid value '" + text + "'");
  return value;
}

bool parse_bool(const std::string& text, const std::string& context) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw std::invalid_argument(context + ": expected true/false, got '" + text + "'");
}

// Walks the file and dispatches each key to its setter; unknown keys and
// malformed lines are reported with file:line context.
void parse_key_values(
    const std::string& path,
    const std::map<std::string, std::function<void(const std::string&,
                                                   const std::string&)>>& setters) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string context = path + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(context + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument(context + ": expected 'key = value'");

    const auto it = setters.find(key);
    if (it == setters.end())
      throw std::invalid_argument(context + ": unknown key '" + key + "'");
    it->second(value, context);
  }
}

}  // namespace

SimFileConfig parse_sim_config(const std::string& path) {
  SimFileConfig cfg;
  SimConfig& sim = cfg.sim;

  const std::map<std::string,
                 std::function<void(const std::string&, const std::string&)>>
      setters = {
          {"machines", [&](const std::string& v, const std::string& c) {
             sim.machine_count = parse_number<int>(v, c);
           }},
          {"subspaces", [&](const std::string& v, const std::string& c) {
             sim.subspace_count = parse_number<int>(v, c);
           }},
          {"interest_universe", [&](const std::string& v, const std::string& c) {
             sim.interest_universe = parse_number<int>(v, c);
           }},
          {"interests_per_machine", [&](const std::string& v, const std::string& c) {
             sim.interests_per_machine = parse_number<int>(v, c);
           }},
          {"w_interest", [&](const std::string& v, const std::string& c) {
             sim.weights.interest = parse_number<double>(v, c);
           }},
          {"w_spatial", [&](const std::string& v, const std::string& c) {
             sim.weights.spatial = parse_number<double>(v, c);
           }},
          {"w_neighbor", [&](const std::string& v, const std::string& c) {
             sim.weights.neighbor = parse_number<double>(v, c);
           }},
          {"decay_a", [&](const std::string& v, const std::string& c) {
             sim.decay.a = parse_number<double>(v, c);
           }},
          {"c_th", [&](const std::string& v, const std::string& c) {
             sim.decay.threshold = parse_number<double>(v, c);
           }},
          {"visibility", [&](const std::string& v, const std::string& c) {
             if (v == "infrastructure")
               sim.visibility = VisibilityMode::infrastructure;
             else if (v == "adhoc")
               sim.visibility = VisibilityMode::adhoc;
             else
               throw std::invalid_argument(
                   c + ": visibility must be 'infrastructure' or 'adhoc'");
           }},
          {"adhoc_range", [&](const std::string& v, const std::string& c) {
             sim.adhoc_range = parse_number<int>(v, c);
           }},
          {"p_move", [&](const std::string& v, const std::string& c) {
             sim.churn.p_move = parse_number<double>(v, c);
           }},
          {"p_interest", [&](const std::string& v, const std::string& c) {
             sim.churn.p_interest = parse_number<double>(v, c);
           }},
          {"steps", [&](const std::string& v, const std::string& c) {
             sim.steps = parse_number<int>(v, c);
           }},
          {"seed", [&](const std::string& v, const std::string& c) {
             sim.seed = parse_number<std::uint64_t>(v, c);
           }},
          {"decay_scaled", [&](const std::string& v, const std::string& c) {
             sim.decay_scaled = parse_bool(v, c);
           }},
          {"refractory", [&](const std::string& v, const std::string& c) {
             sim.refractory = parse_number<int>(v, c);
           }},
          {"baseline_degree", [&](const std::string& v, const std::string& c) {
             cfg.baseline_degree = parse_number<int>(v, c);
           }},
      };

  parse_key_values(path, setters);
  sim.validate();
  return cfg;
}

MazeScenarioConfig parse_maze_config(const std::string& path) {
  MazeScenarioConfig cfg;

  const std::map<std::string,
                 std::function<void(const std::string&, const std::string&)>>
      setters = {
          {"maze", [&](const std::string& v, const std::string&) {
             cfg.maze_path = v;
           }},
          {"radio_range", [&](const std::string& v, const std::string& c) {
             cfg.radio_range = parse_number<int>(v, c);
           }},
          {"max_steps", [&](const std::string& v, const std::string& c) {
             cfg.max_steps = parse_number<int>(v, c);
           }},
          {"seed", [&](const std::string& v, const std::string& c) {
             cfg.seed = parse_number<std::uint64_t>(v, c);
           }},
          {"exchange_cap", [&](const std::string& v, const std::string& c) {
             cfg.exchange_cap = parse_number<int>(v, c);
           }},
      };

  parse_key_values(path, setters);
  if (cfg.radio_range < 0)
    throw std::invalid_argument("maze config: radio_range must be >= 0");
  if (cfg.max_steps < 0)
    throw std::invalid_argument("maze config: max_steps must be >= 0");
  if (cfg.exchange_cap && *cfg.exchange_cap < 0)
    throw std::invalid_argument("maze config: exchange_cap must be >= 0");
  return cfg;
}

}  // namespace msn
