#pragma once

#include <cstdint>

namespace vidomit {

/// Counter-based deterministic generator (splitmix64). Used everywhere the
/// toolkit draws randomness so identical seeds give identical artifacts on
/// every platform.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform draw from [0, bound), bound >= 1. Rejection sampling, so the
  /// result is unbiased and still fully deterministic.
  std::uint64_t next_below(std::uint64_t bound) {
    // threshold = 2^64 mod bound, computed without 128-bit arithmetic
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Order-independent per-cell seed derivation for sweeps: mixing the base
/// seed with the cell coordinates gives every cell its own stream no matter
/// which order cells are executed in.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  SplitMix64 g(base ^ (a * 0x9e3779b97f4a7c15ull) ^ (b * 0xc2b2ae3d27d4eb4full));
  return g.next();
}

}  // namespace vidomit
