#pragma once

#include <cstdint>

namespace snspd {

// Deterministic generator used everywhere randomness is needed. xoshiro256++
// with splitmix64 seeding; distributions are implemented here rather than
// taken from <random> so that traces are bit-identical across standard
// libraries and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { reseed(seed); }

  void reseed(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }

  // Standard normal via Box-Muller; cached second value.
  double normal();

  // Exponential with the given mean.
  double exponential(double mean);

  // Poisson-distributed count (inversion for small means, normal-tail safe
  // multiplication method otherwise).
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stream derivation: (seed, index) -> independent child seed. Used to give
// Monte Carlo trials, paired detectors, and engine sub-streams their own
// generators so that parallel execution order cannot matter.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace snspd
