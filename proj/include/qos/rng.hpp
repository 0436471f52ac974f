#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qos {

// Derives an independent engine seed for a named substream of a base seed,
// so components can consume randomness without perturbing each other.
inline std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seeded random stream with portable transforms. The mt19937_64 output
// sequence is fully specified by the standard; the helpers below avoid
// std::uniform_real_distribution and friends, whose draw sequences are
// implementation-defined and would break cross-platform reproducibility.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double canonical() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1); safe to pass to log().
  double canonical_open() {
    return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
  }

  double uniform(double lo, double hi) { return lo + canonical() * (hi - lo); }

  // Exponential with the given mean; strictly positive.
  double exponential(double mean) { return -mean * std::log(canonical_open()); }

  // Uniform integer in [0, n), n >= 1.
  std::uint64_t uniform_int(std::uint64_t n) {
    auto v = static_cast<std::uint64_t>(canonical() * static_cast<double>(n));
    return v < n ? v : n - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qos
