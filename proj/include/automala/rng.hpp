#pragma once

#include "automala/core.hpp"

#include <cstdint>
#include <random>

namespace automala {

/// Per-chain random stream.
///
/// Wraps a 64-bit Mersenne twister seeded from (seed, stream) through
/// SplitMix64, so distinct streams of one seed are decorrelated. The draw
/// order of every kernel is fixed, which makes traces bit-reproducible on a
/// given platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(mix(seed, stream)) {}

  /// Uniform on the open interval (0, 1).
  double uniform() {
    // 53 random bits, offset by half an ulp so neither endpoint is reachable.
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  double normal() { return normal_(engine_); }

  double gamma(double shape) {
    return std::gamma_distribution<double>(shape, 1.0)(engine_);
  }

  Vector normal_vector(Eigen::Index d) {
    Vector z(d);
    for (Eigen::Index i = 0; i < d; ++i) z[i] = normal();
    return z;
  }

  std::mt19937_64& engine() { return engine_; }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

 private:
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
  }

  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace automala
