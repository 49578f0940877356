#pragma once

#include <cstdint>
#include <random>

namespace msn {

// Deterministic random source for simulation runs. mt19937_64 output is
// specified by the standard, and the derived draws below avoid the
// implementation-defined std distributions, so identical seeds produce
// identical runs on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Unbiased integer in [0, n) via rejection sampling. n must be >= 1.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t min = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next();
      if (r >= min) return r % n;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace msn
