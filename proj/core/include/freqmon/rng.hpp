#pragma once

// Portable seeded randomness.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++
// standard. Uniform reals: the top 53 bits of one engine output, scaled by
// 2^-53, so [0, 1) doubles are bit-identical on every conforming platform
// (std::uniform_real_distribution is not).
//
// Seed derivation for independent streams: seed_i = mix_seed(base, i), the
// SplitMix64 output function applied to base + (i + 1) * 0x9E3779B97F4A7C15.

#include <cstdint>
#include <random>
#include <span>

namespace freqmon {

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t i) noexcept {
  return splitmix64_mix(base + (i + 1) * 0x9E3779B97F4A7C15ULL);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Index k with probability cumulative[k] - cumulative[k-1]. The last
  /// entry is treated as 1 so rounding never falls off the end.
  std::size_t categorical(std::span<const double> cumulative);

 private:
  std::mt19937_64 engine_;
};

}  // namespace freqmon
