#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mmbn {

/// Seeded generator with platform-independent transforms. The engine is
/// std::mt19937_64; the distributions are written out here because the
/// standard library ones are not reproducible across implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (one value per call).
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Unit-mean exponential.
  double exponential() { return -std::log(1.0 - uniform()); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n) {
    const auto wide = static_cast<unsigned __int128>(engine_()) * n;
    return static_cast<std::size_t>(wide >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

namespace streams {
inline constexpr std::uint64_t kTopology = 1;
inline constexpr std::uint64_t kChannel = 2;
inline constexpr std::uint64_t kRandomBaseline = 3;
}  // namespace streams

}  // namespace mmbn
