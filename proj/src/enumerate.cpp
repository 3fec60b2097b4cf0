#include "predictive/enumerate.hpp"

namespace predictive {

PathTable<double> enumerate_paths_parallel(int alphabet, int horizon,
                                           const PmfFn<double>& pmf,
                                           size_t budget) {
  PathTable<double> t{alphabet, horizon, {}};
  t.p.assign(checked_table_size(alphabet, horizon, budget), 0.0);

  // Split depth: enough subtrees to keep the thread pool busy. The split is
  // a function of the problem alone, never of the thread count.
  int depth = 0;
  size_t tasks = 1;
  while (depth < horizon && tasks < 256) {
    tasks *= static_cast<size_t>(alphabet);
    ++depth;
  }

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t task = 0; task < static_cast<std::ptrdiff_t>(tasks);
       ++task) {
    std::vector<int> prefix(depth);
    size_t rem = static_cast<size_t>(task);
    for (int i = depth - 1; i >= 0; --i) {
      prefix[i] = static_cast<int>(rem % alphabet);
      rem /= alphabet;
    }
    // Recompute the prefix probability left to right, matching the serial walk.
    double q = 1.0;
    std::vector<int> partial;
    partial.reserve(horizon);
    for (int i = 0; i < depth; ++i) {
      const std::vector<double> step = pmf(partial);
      q *= step[prefix[i]];
      partial.push_back(prefix[i]);
    }
    detail::fill_subtree<double>(pmf, alphabet, horizon, partial, q, t.p);
  }
  return t;
}

namespace {

PmfFn<double> strategy_pmf(const Strategy& s) {
  if (s.space() != SpaceTag::Categorical)
    throw SpaceMismatch("finite_dim_law requires a categorical strategy");
  return [&s](std::span<const int> history) {
    return s.predictive(to_observations(history)).pmf();
  };
}

}  // namespace

PathTable<double> finite_dim_law(const Strategy& s, int horizon, size_t budget,
                                 bool parallel) {
  const PmfFn<double> pmf = strategy_pmf(s);
  if (parallel)
    return enumerate_paths_parallel(s.alphabet_size(), horizon, pmf, budget);
  return enumerate_paths_serial<double>(s.alphabet_size(), horizon, pmf, budget);
}

PathTable<Rational> finite_dim_law_exact(const CategoricalExact& s, int horizon,
                                         size_t budget) {
  const PmfFn<Rational> pmf = [&s](std::span<const int> history) {
    return s.predictive_exact(history);
  };
  return enumerate_paths_serial<Rational>(s.exact_alphabet_size(), horizon, pmf,
                                          budget);
}

}  // namespace predictive
