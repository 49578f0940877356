#include "msn/network.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace msn {

void SimConfig::validate() const {
  if (machine_count <= 0)
    throw std::invalid_argument("SimConfig: machine_count must be > 0");
  if (subspace_count <= 0)
    throw std::invalid_argument("SimConfig: subspace_count must be > 0");
  if (interest_universe <= 0)
    throw std::invalid_argument("SimConfig: interest_universe must be > 0");
  if (interests_per_machine <= 0 || interests_per_machine > interest_universe)
    throw std::invalid_argument(
        "SimConfig: interests_per_machine must satisfy 0 < k <= K");
  weights.validate();
  decay.validate();
  if (churn.p_move < 0.0 || churn.p_move > 1.0 || churn.p_interest < 0.0 ||
      churn.p_interest > 1.0)
    throw std::invalid_argument("SimConfig: churn probabilities must be in [0, 1]");
  if (visibility == VisibilityMode::adhoc &&
      (adhoc_range < 0 || adhoc_range >= subspace_count))
    throw std::invalid_argument("SimConfig: adhoc range must be in [0, S)");
  if (steps <= 0) throw std::invalid_argument("SimConfig: steps must be > 0");
  if (refractory < 0)
    throw std::invalid_argument("SimConfig: refractory must be >= 0");
}

namespace {

template <typename T>
void insert_sorted(std::vector<T>& v, T value) {
  v.insert(std::lower_bound(v.begin(), v.end(), value), value);
}

template <typename T>
void erase_sorted(std::vector<T>& v, T value) {
  auto it = std::lower_bound(v.begin(), v.end(), value);
  assert(it != v.end() && *it == value);
  v.erase(it);
}

std::vector<int> sample_interest_subset(int universe, int k, Rng& rng) {
  std::vector<int> pool(universe);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng.below(universe - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

Network::Network(const SimConfig& config) : config_(config), rng_(config.seed) {
  config_.validate();
  const int m = config_.machine_count;
  profiles_.resize(m);
  created_at_.assign(static_cast<std::size_t>(m) * m, -1);
  formation_strength_.assign(static_cast<std::size_t>(m) * m, 0.0);
  if (config_.refractory > 0)
    last_expired_.assign(static_cast<std::size_t>(m) * m, -1);
  words_per_row_ = (m + 63) / 64;
  followee_bits_.assign(static_cast<std::size_t>(m) * words_per_row_, 0);

  for (int id = 0; id < m; ++id) {
    MachineProfile& p = profiles_[id];
    p.id = static_cast<MachineId>(id);
    p.location = static_cast<int>(rng_.below(config_.subspace_count));
    p.interests = sample_interest_subset(config_.interest_universe,
                                         config_.interests_per_machine, rng_);
  }
}

const MachineProfile& Network::machine(MachineId id) const {
  if (id >= profiles_.size())
    throw std::invalid_argument("Network: unknown machine id");
  return profiles_[id];
}

std::size_t Network::link_slot(MachineId follower, MachineId followee) const {
  return static_cast<std::size_t>(follower) * machine_count() + followee;
}

bool Network::has_link(MachineId follower, MachineId followee) const {
  return created_at_[link_slot(follower, followee)] >= 0;
}

void Network::add_link(MachineId follower, MachineId followee, double strength) {
  const std::size_t slot = link_slot(follower, followee);
  assert(created_at_[slot] < 0 && follower != followee);
  created_at_[slot] = step_;
  formation_strength_[slot] = strength;
  insert_sorted(profiles_[follower].followees, followee);
  followee_bits_[static_cast<std::size_t>(follower) * words_per_row_ +
                 followee / 64] |= std::uint64_t{1} << (followee % 64);
  ++link_count_;
}

void Network::remove_link(MachineId follower, MachineId followee) {
  const std::size_t slot = link_slot(follower, followee);
  assert(created_at_[slot] >= 0);
  created_at_[slot] = -1;
  erase_sorted(profiles_[follower].followees, followee);
  followee_bits_[static_cast<std::size_t>(follower) * words_per_row_ +
                 followee / 64] &= ~(std::uint64_t{1} << (followee % 64));
  --link_count_;
}

std::vector<Link> Network::live_links() const {
  std::vector<Link> out;
  out.reserve(link_count_);
  const int m = machine_count();
  for (int f = 0; f < m; ++f) {
    for (int e = 0; e < m; ++e) {
      const std::size_t slot = static_cast<std::size_t>(f) * m + e;
      if (created_at_[slot] >= 0)
        out.push_back(Link{static_cast<MachineId>(f), static_cast<MachineId>(e),
                           created_at_[slot], formation_strength_[slot]});
    }
  }
  return out;
}

std::vector<std::pair<MachineId, MachineId>> Network::visible_pairs() const {
  std::vector<std::pair<MachineId, MachineId>> out;
  const int m = machine_count();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      if (config_.visibility == VisibilityMode::adhoc &&
          std::abs(profiles_[i].location - profiles_[j].location) >
              config_.adhoc_range)
        continue;
      out.emplace_back(static_cast<MachineId>(i), static_cast<MachineId>(j));
    }
  }
  return out;
}

// Connection strength for one ordered pair against the current profiles.
// Matches connection_strength() on the same profiles exactly; the neighbor
// axis uses the followee bitsets so the all-pairs discovery scan stays cheap.
double Network::pair_strength(MachineId i, MachineId j) const {
  const MachineProfile& pi = profiles_[i];
  const MachineProfile& pj = profiles_[j];

  const double interest = interest_similarity(pi, pj);

  double spatial = 1.0;
  if (config_.subspace_count > 1) {
    const double max_dist = static_cast<double>(config_.subspace_count - 1);
    spatial = 1.0 - std::abs(static_cast<double>(pi.location) -
                             static_cast<double>(pj.location)) /
                        max_dist;
  }

  double neighbor = 0.0;
  if (!pi.followees.empty()) {
    const std::uint64_t* a = &followee_bits_[static_cast<std::size_t>(i) * words_per_row_];
    const std::uint64_t* b = &followee_bits_[static_cast<std::size_t>(j) * words_per_row_];
    int shared = 0;
    for (int w = 0; w < words_per_row_; ++w) shared += std::popcount(a[w] & b[w]);
    neighbor = static_cast<double>(shared) / static_cast<double>(pi.followees.size());
  }

  return config_.weights.interest * interest + config_.weights.spatial * spatial +
         config_.weights.neighbor * neighbor;
}

void Network::churn_machine(MachineProfile& m) {
  const ChurnParams& churn = config_.churn;
  if (churn.p_move > 0.0 && rng_.unit() < churn.p_move)
    m.location = static_cast<int>(rng_.below(config_.subspace_count));

  const int k = static_cast<int>(m.interests.size());
  const int universe = config_.interest_universe;
  if (churn.p_interest > 0.0 && k > 0 && k < universe &&
      rng_.unit() < churn.p_interest) {
    const int drop_idx = static_cast<int>(rng_.below(k));
    int pick = static_cast<int>(rng_.below(universe - k));
    // Resolve pick-th interest id not currently held.
    int replacement = -1;
    auto held = m.interests.begin();
    for (int id = 0; id < universe; ++id) {
      if (held != m.interests.end() && *held == id) {
        ++held;
        continue;
      }
      if (pick == 0) {
        replacement = id;
        break;
      }
      --pick;
    }
    assert(replacement >= 0);
    m.interests.erase(m.interests.begin() + drop_idx);
    insert_sorted(m.interests, replacement);
  }
}

StepReport Network::step() {
  StepReport report;
  const int m = machine_count();
  const double c_th = config_.decay.threshold;

  // Phase 1: decay and expiry. A link created at step s has age step_ - s;
  // it is removed once its decayed strength falls strictly below c_th.
  for (int f = 0; f < m; ++f) {
    for (int e = 0; e < m; ++e) {
      const std::size_t slot = static_cast<std::size_t>(f) * m + e;
      const int created = created_at_[slot];
      if (created < 0) continue;
      double strength = decayed_strength(step_ - created, config_.decay.a);
      if (config_.decay_scaled) strength *= formation_strength_[slot];
      if (strength < c_th) {
        remove_link(static_cast<MachineId>(f), static_cast<MachineId>(e));
        if (!last_expired_.empty()) last_expired_[slot] = step_;
        ++report.expired;
      }
    }
  }

  // Phase 2: churn, machines in id order.
  for (MachineProfile& profile : profiles_) churn_machine(profile);

  // Phase 3: discovery and formation. Strengths are evaluated against the
  // post-churn profiles and the post-expiry link state; all formations are
  // applied together afterwards so no pair sees another's new link.
  if (discovery_enabled_) {
    const bool adhoc = config_.visibility == VisibilityMode::adhoc;
    std::vector<std::pair<std::size_t, double>> formed;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        if (i == j) continue;
        const std::size_t slot = static_cast<std::size_t>(i) * m + j;
        if (created_at_[slot] >= 0) continue;
        if (adhoc && std::abs(profiles_[i].location - profiles_[j].location) >
                         config_.adhoc_range)
          continue;
        if (!last_expired_.empty() && last_expired_[slot] >= 0 &&
            step_ - last_expired_[slot] < config_.refractory)
          continue;
        const double strength =
            pair_strength(static_cast<MachineId>(i), static_cast<MachineId>(j));
        if (should_connect(strength, c_th)) formed.emplace_back(slot, strength);
      }
    }
    for (const auto& [slot, strength] : formed) {
      add_link(static_cast<MachineId>(slot / m), static_cast<MachineId>(slot % m),
               strength);
    }
    report.formed = static_cast<int>(formed.size());
  }

  ++step_;
  report.live = link_count_;
  return report;
}

void Network::inject_link(MachineId follower, MachineId followee) {
  if (follower >= profiles_.size() || followee >= profiles_.size())
    throw std::invalid_argument("inject_link: unknown machine id");
  if (follower == followee)
    throw std::invalid_argument("inject_link: self-links are not allowed");
  if (has_link(follower, followee))
    throw std::invalid_argument("inject_link: link already live");
  add_link(follower, followee, 1.0);
}

std::vector<MachineId> Network::disseminate(const Post& post) const {
  const int m = machine_count();
  if (post.origin >= static_cast<MachineId>(m))
    throw std::invalid_argument("disseminate: unknown origin id");

  std::vector<char> reached(m, 0);
  std::vector<MachineId> frontier{post.origin};
  reached[post.origin] = 1;

  for (int hop = 0; hop < post.hop_limit && !frontier.empty(); ++hop) {
    std::vector<MachineId> next;
    for (MachineId node : frontier) {
      // Followers of `node` receive the post.
      for (int f = 0; f < m; ++f) {
        if (reached[f] || created_at_[static_cast<std::size_t>(f) * m + node] < 0)
          continue;
        reached[f] = 1;
        next.push_back(static_cast<MachineId>(f));
      }
    }
    frontier = std::move(next);
  }

  std::vector<MachineId> out;
  for (int id = 0; id < m; ++id)
    if (reached[id]) out.push_back(static_cast<MachineId>(id));
  return out;
}

bool Network::followees_match_links() const {
  const int m = machine_count();
  int total = 0;
  for (int f = 0; f < m; ++f) {
    std::vector<MachineId> from_links;
    for (int e = 0; e < m; ++e)
      if (created_at_[static_cast<std::size_t>(f) * m + e] >= 0) from_links.push_back(static_cast<MachineId>(e));
    if (from_links != profiles_[f].followees) return false;
    total += static_cast<int>(from_links.size());
  }
  return total == link_count_;
}

RunTrace run(Network& net, int steps) {
  if (steps < 1) throw std::invalid_argument("run: steps must be >= 1");
  RunTrace trace;
  trace.steps.reserve(steps);
  for (int i = 0; i < steps; ++i) trace.steps.push_back(net.step());
  return trace;
}

}  // namespace msn
