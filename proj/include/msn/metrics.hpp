#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msn/network.hpp"

// Population metrics and the connection-threshold sweep against a fixed
// non-social baseline, with CSV/JSON export of the resulting table.

namespace msn {

/// Aggregated result for one threshold value. mean_connections is live
/// directed links per machine, averaged over the sweep window and seeds.
struct SweepResult {
  double c_th = 0.0;
  double mean_connections = 0.0;
  double std_connections = 0.0;  // across-seed sample standard deviation
  int seeds = 0;
  int baseline_connections = 0;  // fixed network per-machine link count
};

/// Non-social reference: every machine holds exactly `degree` immutable
/// outbound links, so its per-machine link count is the degree itself.
struct FixedBaseline {
  int degree = 50;

  void validate(int machine_count) const;
};

struct SweepOptions {
  /// Average the final half of the horizon (default) instead of taking the
  /// raw end-of-horizon sample. The formation/expiry limit cycle makes the
  /// single end sample phase-sensitive; the window average is stable.
  bool time_average = true;
};

/// Live directed links per machine.
double average_connections(const Network& net);

/// Weakly connected components, links treated as undirected.
int component_count(const Network& net);

/// Runs the configured horizon for every (threshold, seed) cell and
/// aggregates end-of-horizon average_connections. Results are ordered by
/// ascending threshold.
std::vector<SweepResult> threshold_sweep(const SimConfig& base_config,
                                         const std::vector<double>& thresholds,
                                         const std::vector<std::uint64_t>& seeds,
                                         const FixedBaseline& baseline,
                                         const SweepOptions& options = {});

/// Smallest c_th at which the sweep curve falls below the baseline,
/// linearly interpolated between the bracketing points. Input must be
/// sorted by c_th. Returns nullopt when the curve never crosses.
std::optional<double> crossover_threshold(const std::vector<SweepResult>& sweep);

/// CSV export, one row per threshold:
/// c_th,mean_connections,std_connections,seeds,baseline_connections
void export_table(const std::vector<SweepResult>& results, const std::string& path);

/// JSON export: array of objects with the same field names as the CSV.
void export_json(const std::vector<SweepResult>& results, const std::string& path);

/// Serializes a real with 6 significant digits, locale-independent.
std::string format_real(double value);

}  // namespace msn
