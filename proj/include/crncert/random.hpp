#pragma once

// Seeded random draws. Every stochastic quantity in the toolkit is derived
// from a user seed through derive_seed, so results depend on the seed only.

#include <cstdint>
#include <random>

namespace crncert {

std::uint64_t splitmix64(std::uint64_t x);

/// Independent stream seed for (seed, stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi);
  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(eng_);
  }
  double normal() { return std::normal_distribution<double>()(eng_); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace crncert
