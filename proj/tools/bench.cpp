// Benchmark comparing the serial reference kernels with their OpenMP
// counterparts: path enumeration, replicated simulation, empirical cf.
#include <chrono>
#include <cstdio>

#include "predictive/enumerate.hpp"
#include "predictive/exch.hpp"
#include "predictive/parallel.hpp"
#include "predictive/stable_law.hpp"

using namespace predictive;

namespace {

template <class F>
double time_ms(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s %10.1f ms %10.1f ms %8.2fx\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
  std::printf("%-28s %13s %13s %9s  (threads: %d)\n", "kernel", "serial",
              "openmp", "speedup", omp_get_max_threads());

  {
    const DirichletStrategy s =
        DirichletStrategy::classical(1.0, Measure::uniform_categorical(4));
    const int horizon = 9;  // 4^9 = 262144 paths
    PathTable<double> a, b;
    const double ts = time_ms([&] { a = finite_dim_law(s, horizon, 1'000'000, false); });
    const double tp = time_ms([&] { b = finite_dim_law(s, horizon, 1'000'000, true); });
    row("finite_dim_law (4^9)", ts, tp);
    if (a.p != b.p) std::printf("  !! parallel result differs from serial\n");
  }
  {
    const DirichletStrategy s =
        DirichletStrategy::classical(1.0, Measure::uniform_categorical(3));
    std::vector<Path> a, b;
    const double ts = time_ms([&] { a = simulate_batch(s, 60, 20'000, 7, false); });
    const double tp = time_ms([&] { b = simulate_batch(s, 60, 20'000, 7, true); });
    row("simulate_batch (2e4 x 60)", ts, tp);
    for (size_t i = 0; i < a.size(); ++i)
      if (!(a[i].points == b[i].points) || a[i].log_prob != b[i].log_prob) {
        std::printf("  !! parallel result differs from serial\n");
        break;
      }
  }
  {
    const StableLaw law(1.5, 0.0, 1.0);
    std::vector<double> xs;
    const double tdraw = time_ms([&] {
      xs = sample_batch([&](Rng& rng) { return law.sample(rng); }, 1'000'000, 11);
    });
    std::printf("%-28s %10.1f ms (openmp draw)\n", "stable draws (1e6)", tdraw);
    std::vector<double> ts_grid;
    for (int i = 1; i <= 20; ++i) ts_grid.push_back(0.1 * i);
    double da = 0, db = 0;
    const double ts = time_ms([&] {
      for (double t : ts_grid) da += std::abs(empirical_cf(xs, t, false));
    });
    const double tp = time_ms([&] {
      for (double t : ts_grid) db += std::abs(empirical_cf(xs, t, true));
    });
    row("empirical_cf (1e6 x 20)", ts, tp);
    if (da != db) std::printf("  !! parallel result differs from serial\n");
  }
  return 0;
}
