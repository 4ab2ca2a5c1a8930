#pragma once

#include <cstdint>

namespace noisyor {

/// splitmix64 pseudo-random stream (Steele/Lea/Flood 2014, the reference
/// 64-bit mixer used to seed SplittableRandom). Chosen so that sample files
/// are reproducible bit for bit from {algorithm id, seed, draw index} alone,
/// with no dependence on libstdc++ distribution internals.
///
/// Stream identity: "splitmix64-v1". Seeding: the raw 64-bit state is the
/// given seed; substream(seed, index) mixes the index in with one splitmix
/// round before use.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0,1), 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

  /// Independent deterministic stream for (seed, index) pairs.
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    return SplitMix64(mixer.next());
  }

 private:
  std::uint64_t state_;
};

}  // namespace noisyor
