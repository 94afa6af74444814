#pragma once

#include <cstdint>

namespace blochid {

/// Name recorded in trace metadata; bump if the sampling scheme changes.
inline constexpr const char* kRngName = "splitmix64-v1";

/// SplitMix64 (Steele/Lea/Vigna). Tiny, counter-based, platform-stable.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return (next() >> 11) * 0x1.0p-53; }
};

/// Independent substream i of a master seed: the master and the stream index
/// are mixed through one SplitMix64 step each.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t i) {
  SplitMix64 mixer(seed);
  mixer.state ^= 0x9E3779B97F4A7C15ull * (i + 1);
  return SplitMix64(mixer.next());
}

}  // namespace blochid
