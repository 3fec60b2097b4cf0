#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace predictive {

// Seeded generator with fully specified transforms. All variate generation is
// implemented on top of mt19937_64 directly (not std distributions) so that a
// given seed yields the same draw sequence on every platform and thread count.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  // Independent stream for replicate `stream` of a seeded run.
  static Rng derive(uint64_t seed, uint64_t stream) {
    return Rng(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ull)));
  }

  uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1); never returns an exact endpoint.
  double u01_open() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Box-Muller; consumes two uniforms per call, no cached spare.
  double normal() {
    double u1 = u01_open();
    double u2 = u01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double exponential() { return -std::log(u01_open()); }

  // Beta(1, c) via inverse CDF: F(x) = 1 - (1-x)^c.
  double beta_1c(double c) {
    return 1.0 - std::pow(1.0 - u01(), 1.0 / c);
  }

 private:
  static uint64_t mix(uint64_t z) {  // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 gen_;
};

}  // namespace predictive
