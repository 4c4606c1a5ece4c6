#pragma once

#include <cstdint>

namespace tgnn {

/// SplitMix64. Chosen because the whole generator is the four-line finalizer
/// below: any implementation in any language reproduces the streams
/// bit-for-bit, which keeps generated workloads portable.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Unbiased integer in [0, bound); bound must be positive.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (-bound) % bound;  // 2^64 mod bound
    std::uint64_t v = next();
    while (v < threshold) v = next();
    return v % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Stateless sub-stream derivation for parallel repetitions:
/// one SplitMix64 step over seed xor (golden-ratio constant * (index + 1)).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
  return g.next();
}

}  // namespace tgnn
