#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <omp.h>

#include "predictive/strategy.hpp"

namespace predictive {

// Deterministic parallel reductions. Work is split into fixed-size chunks
// whose partial results are combined serially in chunk order, so the result
// is bit-identical for every thread count (including 1). Serial mode runs
// the same chunked loop without the parallel pragma and is kept as the
// reference implementation for tests and benchmarks.

inline constexpr size_t kChunk = 4096;

template <class F>
double chunked_sum(size_t n, F&& f, bool parallel = true) {
  const size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nchunks); ++c) {
    const size_t lo = static_cast<size_t>(c) * kChunk;
    const size_t hi = std::min(lo + kChunk, n);
    double s = 0.0;
    for (size_t i = lo; i < hi; ++i) s += f(i);
    partial[c] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

template <class F>
std::complex<double> chunked_csum(size_t n, F&& f, bool parallel = true) {
  const size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<std::complex<double>> partial(nchunks);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nchunks); ++c) {
    const size_t lo = static_cast<size_t>(c) * kChunk;
    const size_t hi = std::min(lo + kChunk, n);
    std::complex<double> s = 0.0;
    for (size_t i = lo; i < hi; ++i) s += f(i);
    partial[c] = s;
  }
  std::complex<double> total = 0.0;
  for (const auto& s : partial) total += s;
  return total;
}

struct MaxLoc {
  double value = 0.0;
  size_t index = 0;
};

// Maximum of f over [0, n) with the lowest attaining index; deterministic
// across thread counts.
template <class F>
MaxLoc chunked_max(size_t n, F&& f, bool parallel = true) {
  const size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<MaxLoc> partial(nchunks);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nchunks); ++c) {
    const size_t lo = static_cast<size_t>(c) * kChunk;
    const size_t hi = std::min(lo + kChunk, n);
    MaxLoc best{f(lo), lo};
    for (size_t i = lo + 1; i < hi; ++i) {
      const double v = f(i);
      if (v > best.value) best = {v, i};
    }
    partial[c] = best;
  }
  MaxLoc best = partial[0];
  for (const auto& m : partial)
    if (m.value > best.value) best = m;
  return best;
}

// Replicated path simulation with one derived RNG stream per replicate.
std::vector<Path> simulate_batch(const Strategy& s, int n, size_t reps,
                                 uint64_t seed, bool parallel = true);

// Replicated scalar sampling (one value per derived stream).
template <class Sampler>
std::vector<double> sample_batch(Sampler&& sampler, size_t reps, uint64_t seed,
                                 bool parallel = true) {
  std::vector<double> out(reps);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(reps); ++i) {
    Rng rng = Rng::derive(seed, static_cast<uint64_t>(i));
    out[i] = sampler(rng);
  }
  return out;
}

// (1/N) sum exp(i t X_j), chunk-deterministic.
std::complex<double> empirical_cf(std::span<const double> samples, double t,
                                  bool parallel = true);

}  // namespace predictive
