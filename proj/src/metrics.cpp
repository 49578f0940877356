#include "msn/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace msn {

void FixedBaseline::validate(int machine_count) const {
  if (degree < 0 || degree > machine_count - 1)
    throw std::invalid_argument("FixedBaseline: degree must be in [0, M-1]");
}

double average_connections(const Network& net) {
  return static_cast<double>(net.link_count()) /
         static_cast<double>(net.machine_count());
}

int component_count(const Network& net) {
  const int m = net.machine_count();
  std::vector<int> parent(m);
  for (int i = 0; i < m; ++i) parent[i] = i;

  auto find = [&parent](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  int components = m;
  for (const Link& link : net.live_links()) {
    const int a = find(static_cast<int>(link.follower));
    const int b = find(static_cast<int>(link.followee));
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components;
}

namespace {

double cell_metric(const SimConfig& config, const RunTrace& trace) {
  const int total = static_cast<int>(trace.steps.size());
  const double m = static_cast<double>(config.machine_count);
  // Mean over the final half of the horizon, inclusive of the end point.
  double sum = 0.0;
  int counted = 0;
  for (int s = total / 2; s < total; ++s) {
    sum += static_cast<double>(trace.steps[s].live) / m;
    ++counted;
  }
  return sum / static_cast<double>(counted);
}

}  // namespace

std::vector<SweepResult> threshold_sweep(const SimConfig& base_config,
                                         const std::vector<double>& thresholds,
                                         const std::vector<std::uint64_t>& seeds,
                                         const FixedBaseline& baseline,
                                         const SweepOptions& options) {
  if (thresholds.empty())
    throw std::invalid_argument("threshold_sweep: thresholds must be nonempty");
  for (double t : thresholds)
    if (t < 0.0 || t > 1.0)
      throw std::invalid_argument("threshold_sweep: thresholds must be in [0, 1]");
  if (seeds.empty())
    throw std::invalid_argument("threshold_sweep: seeds must be nonempty");
  base_config.validate();
  baseline.validate(base_config.machine_count);

  std::vector<double> grid = thresholds;
  std::sort(grid.begin(), grid.end());

  std::vector<SweepResult> results;
  results.reserve(grid.size());
  for (double c_th : grid) {
    SimConfig config = base_config;
    config.decay.threshold = c_th;

    std::vector<double> per_seed;
    per_seed.reserve(seeds.size());
    for (std::uint64_t seed : seeds) {
      config.seed = seed;
      Network net(config);
      const RunTrace trace = run(net, config.steps);
      per_seed.push_back(options.time_average ? cell_metric(config, trace)
                                              : average_connections(net));
    }

    const double n = static_cast<double>(per_seed.size());
    double mean = 0.0;
    for (double v : per_seed) mean += v;
    mean /= n;
    double var = 0.0;
    if (per_seed.size() > 1) {
      for (double v : per_seed) var += (v - mean) * (v - mean);
      var /= n - 1.0;
    }

    SweepResult row;
    row.c_th = c_th;
    row.mean_connections = mean;
    row.std_connections = std::sqrt(var);
    row.seeds = static_cast<int>(per_seed.size());
    row.baseline_connections = baseline.degree;
    results.push_back(row);
  }
  return results;
}

std::optional<double> crossover_threshold(const std::vector<SweepResult>& sweep) {
  for (std::size_t i = 1; i < sweep.size(); ++i)
    if (sweep[i].c_th < sweep[i - 1].c_th)
      throw std::invalid_argument("crossover_threshold: sweep must be sorted by c_th");

  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const double baseline = static_cast<double>(sweep[i].baseline_connections);
    if (sweep[i].mean_connections < baseline) {
      if (i == 0) return sweep[0].c_th;  // already below at the first point
      const SweepResult& lo = sweep[i - 1];
      const SweepResult& hi = sweep[i];
      const double drop = lo.mean_connections - hi.mean_connections;
      if (drop <= 0.0) return hi.c_th;
      const double frac = (lo.mean_connections - baseline) / drop;
      return lo.c_th + frac * (hi.c_th - lo.c_th);
    }
  }
  return std::nullopt;
}

std::string format_real(double value) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

void export_table(const std::vector<SweepResult>& results, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("export_table: cannot open '" + path + "' for writing");
  out << "c_th,mean_connections,std_connections,seeds,baseline_connections\n";
  for (const SweepResult& row : results) {
    out << format_real(row.c_th) << ',' << format_real(row.mean_connections) << ','
        << format_real(row.std_connections) << ',' << row.seeds << ','
        << row.baseline_connections << '\n';
  }
  out.flush();
  if (!out)
    throw std::runtime_error("export_table: write failed for '" + path + "'");
}

void export_json(const std::vector<SweepResult>& results, const std::string& path) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SweepResult& row : results) {
    arr.push_back({{"c_th", row.c_th},
                   {"mean_connections", row.mean_connections},
                   {"std_connections", row.std_connections},
                   {"seeds", row.seeds},
                   {"baseline_connections", row.baseline_connections}});
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("export_json: cannot open '" + path + "' for writing");
  out << arr.dump(2) << '\n';
  if (!out)
    throw std::runtime_error("export_json: write failed for '" + path + "'");
}

}  // namespace msn
