#include "msn/social.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace msn {

namespace {

template <typename T>
std::size_t intersection_count(const std::vector<T>& a, const std::vector<T>& b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

}  // namespace

void Weights::validate() const {
  if (interest < 0.0 || spatial < 0.0 || neighbor < 0.0)
    throw std::invalid_argument("Weights: all weights must be >= 0");
  const double sum = interest + spatial + neighbor;
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("Weights: w_I + w_D + w_N must equal 1");
}

void DecayParams::validate() const {
  if (!(a > 0.0)) throw std::invalid_argument("DecayParams: a must be > 0");
  if (threshold < 0.0 || threshold > 1.0)
    throw std::invalid_argument("DecayParams: threshold must be in [0, 1]");
}

double interest_similarity(const MachineProfile& i, const MachineProfile& j) {
  if (i.interests.empty()) return 0.0;
  const std::size_t shared = intersection_count(i.interests, j.interests);
  return static_cast<double>(shared) / static_cast<double>(i.interests.size());
}

double spatial_similarity(const MachineProfile& i, const MachineProfile& j,
                          double max_dist) {
  if (!(max_dist > 0.0))
    throw std::invalid_argument("spatial_similarity: max_dist must be > 0");
  const double dist = std::abs(static_cast<double>(i.location) -
                               static_cast<double>(j.location));
  if (dist > max_dist)
    throw std::invalid_argument(
        "spatial_similarity: machine distance exceeds max_dist");
  return 1.0 - dist / max_dist;
}

double neighbor_similarity(const MachineProfile& i, const MachineProfile& j) {
  if (i.followees.empty()) return 0.0;
  const std::size_t shared = intersection_count(i.followees, j.followees);
  return static_cast<double>(shared) / static_cast<double>(i.followees.size());
}

StrengthBreakdown connection_strength(const MachineProfile& i,
                                      const MachineProfile& j,
                                      const Weights& w, double max_dist) {
  w.validate();
  StrengthBreakdown out;
  out.interest = interest_similarity(i, j);
  out.spatial = spatial_similarity(i, j, max_dist);
  out.neighbor = neighbor_similarity(i, j);
  out.total = w.interest * out.interest + w.spatial * out.spatial +
              w.neighbor * out.neighbor;
  return out;
}

bool should_connect(double c_ij, double c_th) { return c_ij >= c_th; }

double decayed_strength(int delta_t, double a) {
  return std::exp(-a * static_cast<double>(delta_t));
}

int link_expiry_step(double a, double c_th) {
  if (!(a > 0.0)) throw std::invalid_argument("link_expiry_step: a must be > 0");
  if (c_th < 0.0 || c_th > 1.0)
    throw std::invalid_argument("link_expiry_step: c_th must be in [0, 1]");
  if (c_th == 0.0) return kNeverExpires;
  if (c_th == 1.0) return 1;

  // Closed form floor(ln(1/c_th)/a) + 1, then nudged so the result agrees
  // exactly with decayed_strength under floating-point rounding.
  const double tau = std::log(1.0 / c_th) / a;
  int t = std::max(1, static_cast<int>(std::floor(tau)) + 1);
  while (t > 1 && decayed_strength(t - 1, a) < c_th) --t;
  while (decayed_strength(t, a) >= c_th) ++t;
  return t;
}

}  // namespace msn
