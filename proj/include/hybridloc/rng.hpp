#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace hybridloc {

/// Seeded noise source with a fixed, portable stream.
///
/// Raw bits come from std::mt19937_64, whose output sequence for a given
/// seed is fixed by the C++ standard. Uniforms take the top 53 bits of one
/// draw. Gaussians use the cosine branch of Box-Muller and consume exactly
/// two raw draws each, so the position in the stream depends only on how
/// many values were requested. The std distributions are avoided because
/// their algorithms differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal variate.
  double gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double gaussian(double mean, double stddev) {
    return mean + stddev * gaussian();
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hybridloc
