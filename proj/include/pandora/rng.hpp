#pragma once

#include <cstdint>

namespace pandora {

/// Counter-based random stream: draw j of stream s under master seed m is
/// mix64(key(m, s) + j * GOLDEN), a stateless function of (m, s, j). Streams
/// can therefore be assigned to replications in any parallel schedule
/// without changing any draw. The mixer is the SplitMix64 finalizer.
class CounterRng {
 public:
  CounterRng(std::uint64_t master_seed, std::uint64_t stream) noexcept
      : key_(derive_key(master_seed, stream)), counter_(0) {}

  std::uint64_t next_u64() noexcept { return mix64(key_ + kGolden * ++counter_); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  static std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  static std::uint64_t derive_key(std::uint64_t master_seed,
                                  std::uint64_t stream) noexcept {
    // Hash seed and stream through two mixing rounds so that nearby
    // (seed, stream) pairs land at unrelated points of the counter space.
    return mix64(mix64(master_seed + kGolden) ^ (stream + kGolden));
  }

  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace pandora
