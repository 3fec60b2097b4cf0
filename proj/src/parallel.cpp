#include "predictive/parallel.hpp"

#include <cmath>

namespace predictive {

std::vector<Path> simulate_batch(const Strategy& s, int n, size_t reps,
                                 uint64_t seed, bool parallel) {
  std::vector<Path> out(reps);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(reps); ++i) {
    Rng rng = Rng::derive(seed, static_cast<uint64_t>(i));
    out[i] = simulate_path(s, n, rng);
    out[i].seed = seed;
  }
  return out;
}

std::complex<double> empirical_cf(std::span<const double> samples, double t,
                                  bool parallel) {
  const size_t n = samples.size();
  const std::complex<double> total = chunked_csum(
      n,
      [&](size_t i) {
        return std::complex<double>(std::cos(t * samples[i]),
                                    std::sin(t * samples[i]));
      },
      parallel);
  return total / static_cast<double>(n);
}

}  // namespace predictive
