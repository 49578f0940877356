#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "msn/rng.hpp"
#include "msn/social.hpp"

// Discrete-time population dynamics over a set of machines: per step the
// engine expires decayed links, applies optional mobility/interest churn,
// then evaluates every visible ordered pair and forms links whose
// connection strength clears the threshold. Followee sets in the machine
// profiles and the link set are kept in lockstep.

namespace msn {

enum class VisibilityMode { infrastructure, adhoc };

struct ChurnParams {
  double p_move = 0.05;      // per machine per step relocation probability
  double p_interest = 0.05;  // per machine per step interest-swap probability
};

struct SimConfig {
  int machine_count = 100;
  int subspace_count = 10;
  int interest_universe = 10;
  int interests_per_machine = 5;
  Weights weights;
  DecayParams decay;
  VisibilityMode visibility = VisibilityMode::infrastructure;
  int adhoc_range = 1;  // visibility radius in subspaces, adhoc mode only
  ChurnParams churn;
  int steps = 200;
  std::uint64_t seed = 1;
  bool decay_scaled = false;  // scale decay by formation-time strength
  int refractory = 0;         // steps before an expired pair may reform

  void validate() const;  // throws std::invalid_argument naming the violation
};

/// Directed follower -> followee edge.
struct Link {
  MachineId follower = 0;
  MachineId followee = 0;
  int created_at = 0;
  double strength_at_formation = 0.0;
};

struct StepReport {
  int formed = 0;
  int expired = 0;
  int live = 0;  // live links after the step completed
};

struct RunTrace {
  std::vector<StepReport> steps;
};

inline constexpr int kUnlimitedHops = std::numeric_limits<int>::max();

/// An information item flowing from its origin to transitive followers.
struct Post {
  MachineId origin = 0;
  std::string payload;
  int hop_limit = kUnlimitedHops;
};

class Network {
 public:
  /// Builds the initial population: uniformly random subspace and a
  /// uniformly random interest subset per machine, no links, step 0.
  explicit Network(const SimConfig& config);

  const SimConfig& config() const { return config_; }
  int current_step() const { return step_; }
  int machine_count() const { return static_cast<int>(profiles_.size()); }
  const MachineProfile& machine(MachineId id) const;
  const std::vector<MachineProfile>& machines() const { return profiles_; }

  int link_count() const { return link_count_; }
  bool has_link(MachineId follower, MachineId followee) const;
  /// Live links sorted by (follower, followee).
  std::vector<Link> live_links() const;

  /// Ordered pairs that can currently see each other: all i != j under
  /// infrastructure, subspace distance <= range under adhoc.
  std::vector<std::pair<MachineId, MachineId>> visible_pairs() const;

  /// One simulation step: decay/expiry, churn, then discovery/formation
  /// applied atomically. Increments the step counter.
  StepReport step();

  /// Machines reached when the post flows followee -> follower,
  /// transitively, up to hop_limit hops. Includes the origin. Returns a
  /// sorted id list. Throws if the origin id is unknown.
  std::vector<MachineId> disseminate(const Post& post) const;

  /// Experiment control: with discovery disabled, steps only decay and
  /// churn. Used to observe link lifetimes in a frozen network.
  void set_discovery_enabled(bool enabled) { discovery_enabled_ = enabled; }

  /// Scenario seam: forms a link unconditionally at the current step,
  /// bypassing the threshold gate. Throws on self-links or duplicates.
  void inject_link(MachineId follower, MachineId followee);

  /// Structural audit: profile followee sets match the link set exactly.
  bool followees_match_links() const;

 private:
  std::size_t link_slot(MachineId follower, MachineId followee) const;
  void add_link(MachineId follower, MachineId followee, double strength);
  void remove_link(MachineId follower, MachineId followee);
  double pair_strength(MachineId i, MachineId j) const;
  void churn_machine(MachineProfile& m);

  SimConfig config_;
  std::vector<MachineProfile> profiles_;
  std::vector<int> created_at_;      // M*M, -1 = no link
  std::vector<double> formation_strength_;
  std::vector<int> last_expired_;    // M*M, -1 = never; kept when refractory > 0
  std::vector<std::uint64_t> followee_bits_;  // M rows of ceil(M/64) words
  int words_per_row_ = 0;
  int link_count_ = 0;
  int step_ = 0;
  bool discovery_enabled_ = true;
  Rng rng_;
};

/// Applies step() `steps` times (steps >= 1) and records per-step counts.
RunTrace run(Network& net, int steps);

}  // namespace msn
