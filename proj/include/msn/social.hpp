#pragma once

#include <cstdint>
#include <limits>
#include <vector>

// Three-axis social connection model: interest, spatial and neighbor
// similarity combined into a weighted connection strength, an inclusive
// threshold gate for link formation, and exponential decay for removal.
// Everything here is a pure function of its arguments.

namespace msn {

using MachineId = std::uint32_t;

/// Public per-machine record: identity, subspace position, interest set
/// and the set of machines it currently follows. Interest and followee
/// vectors are kept sorted and unique.
struct MachineProfile {
  MachineId id = 0;
  int location = 0;  // subspace index, 0-based
  std::vector<int> interests;
  std::vector<MachineId> followees;
};

/// Weighted factors of the three relationship axes; must sum to 1
/// (within 1e-9).
struct Weights {
  double interest = 1.0 / 3.0;
  double spatial = 1.0 / 3.0;
  double neighbor = 1.0 / 3.0;

  void validate() const;  // throws std::invalid_argument on violation
};

/// Exponential decay constant and the connection threshold C_th.
struct DecayParams {
  double a = 0.1;           // per-step decay rate, > 0
  double threshold = 0.45;  // in [0, 1]

  void validate() const;
};

/// Per-axis values and their weighted combination for one ordered pair.
struct StrengthBreakdown {
  double interest = 0.0;
  double spatial = 0.0;
  double neighbor = 0.0;
  double total = 0.0;
};

/// Fraction of i's interests shared with j: |I(i) ∩ I(j)| / |I(i)|.
/// Empty I(i) yields 0. Asymmetric in general.
double interest_similarity(const MachineProfile& i, const MachineProfile& j);

/// 1 - |x(i) - x(j)| / max_dist. Throws if max_dist <= 0 or the pair is
/// farther apart than max_dist.
double spatial_similarity(const MachineProfile& i, const MachineProfile& j,
                          double max_dist);

/// Mutual-followee overlap from i's perspective: |N(i) ∩ N(j)| / |N(i)|.
/// Empty N(i) yields 0 (new machines have no followees yet).
double neighbor_similarity(const MachineProfile& i, const MachineProfile& j);

/// Weighted combination of the three axes.
StrengthBreakdown connection_strength(const MachineProfile& i,
                                      const MachineProfile& j,
                                      const Weights& w, double max_dist);

/// Inclusive formation gate: true iff c_ij >= c_th.
bool should_connect(double c_ij, double c_th);

/// Strength of a link delta_t steps after formation: e^(-a * delta_t).
double decayed_strength(int delta_t, double a);

/// Returned by link_expiry_step when the link can never expire (c_th = 0).
inline constexpr int kNeverExpires = std::numeric_limits<int>::max();

/// Smallest delta_t >= 1 with e^(-a * delta_t) strictly below c_th.
/// Equality with the threshold keeps the link alive. c_th = 0 returns
/// kNeverExpires; c_th = 1 returns 1. Throws for c_th outside [0, 1]
/// or a <= 0.
int link_expiry_step(double a, double c_th);

}  // namespace msn
