#pragma once

#include <functional>
#include <span>
#include <vector>

#include <omp.h>

#include "predictive/errors.hpp"
#include "predictive/rational.hpp"
#include "predictive/strategy.hpp"

namespace predictive {

// Exact finite-dimensional law of (X_1, ..., X_n) over a finite alphabet:
// the chain-rule table g_n. Paths are indexed lexicographically with x_1 as
// the most significant digit.
template <class T>
struct PathTable {
  int alphabet = 0;
  int horizon = 0;
  std::vector<T> p;

  size_t index(std::span<const int> path) const {
    size_t idx = 0;
    for (int x : path) idx = idx * alphabet + static_cast<size_t>(x);
    return idx;
  }
  void decode(size_t idx, std::vector<int>& out) const {
    out.assign(horizon, 0);
    for (int i = horizon - 1; i >= 0; --i) {
      out[i] = static_cast<int>(idx % alphabet);
      idx /= alphabet;
    }
  }
  const T& at(std::span<const int> path) const { return p[index(path)]; }
  T sum() const {
    T s = scalar_from_double<T>(0.0);
    for (const auto& v : p) s += v;
    return s;
  }
};

template <class T>
using PmfFn = std::function<std::vector<T>(std::span<const int>)>;

inline size_t checked_table_size(int alphabet, int horizon, size_t budget) {
  if (alphabet <= 0) throw ParamError("enumeration needs a finite alphabet");
  if (horizon < 0) throw ParamError("horizon must be >= 0");
  size_t size = 1;
  for (int i = 0; i < horizon; ++i) {
    if (size > budget / static_cast<size_t>(alphabet) + 1)
      throw EnumerationBudgetError("path table exceeds the enumeration budget");
    size *= static_cast<size_t>(alphabet);
  }
  if (size > budget)
    throw EnumerationBudgetError("path table exceeds the enumeration budget");
  return size;
}

namespace detail {

// Depth-first fill below a fixed prefix. Probabilities accumulate strictly
// left to right, so every entry is computed by the same operation sequence
// no matter how the tree is split across tasks.
template <class T>
void fill_subtree(const PmfFn<T>& pmf, int alphabet, int horizon,
                  std::vector<int>& prefix, T prefix_prob,
                  std::vector<T>& table) {
  if (static_cast<int>(prefix.size()) == horizon) {
    size_t idx = 0;
    for (int x : prefix) idx = idx * alphabet + static_cast<size_t>(x);
    table[idx] = prefix_prob;
    return;
  }
  const std::vector<T> step = pmf(prefix);
  for (int y = 0; y < alphabet; ++y) {
    prefix.push_back(y);
    T child = prefix_prob * step[y];
    fill_subtree(pmf, alphabet, horizon, prefix, std::move(child), table);
    prefix.pop_back();
  }
}

}  // namespace detail

// Serial reference implementation.
template <class T>
PathTable<T> enumerate_paths_serial(int alphabet, int horizon,
                                    const PmfFn<T>& pmf,
                                    size_t budget = 1'000'000) {
  PathTable<T> t{alphabet, horizon, {}};
  t.p.assign(checked_table_size(alphabet, horizon, budget),
             scalar_from_double<T>(0.0));
  std::vector<int> prefix;
  detail::fill_subtree(pmf, alphabet, horizon, prefix,
                       scalar_from_double<T>(1.0), t.p);
  return t;
}

// OpenMP variant: subtrees below a fixed split depth run in parallel. Each
// entry is owned by exactly one task and computed with the same left-to-right
// products as the serial walk, so the result is bit-identical to it.
PathTable<double> enumerate_paths_parallel(int alphabet, int horizon,
                                           const PmfFn<double>& pmf,
                                           size_t budget = 1'000'000);

// g_n for a categorical strategy via its double-precision predictives.
PathTable<double> finite_dim_law(const Strategy& s, int horizon,
                                 size_t budget = 1'000'000,
                                 bool parallel = true);

// g_n in exact rational arithmetic.
PathTable<Rational> finite_dim_law_exact(const CategoricalExact& s, int horizon,
                                         size_t budget = 1'000'000);

// Sum over the last coordinate: the (n-1)-dimensional law.
template <class T>
PathTable<T> marginalize_last(const PathTable<T>& t) {
  if (t.horizon == 0) throw ParamError("cannot marginalize an empty table");
  PathTable<T> out{t.alphabet, t.horizon - 1, {}};
  out.p.assign(t.p.size() / t.alphabet, scalar_from_double<T>(0.0));
  for (size_t i = 0; i < out.p.size(); ++i) {
    T s = scalar_from_double<T>(0.0);
    for (int y = 0; y < t.alphabet; ++y)
      s += t.p[i * static_cast<size_t>(t.alphabet) + y];
    out.p[i] = s;
  }
  return out;
}

// Sum over the first coordinate: the law of (X_2, ..., X_n).
template <class T>
PathTable<T> marginalize_first(const PathTable<T>& t) {
  if (t.horizon == 0) throw ParamError("cannot marginalize an empty table");
  PathTable<T> out{t.alphabet, t.horizon - 1, {}};
  const size_t block = t.p.size() / t.alphabet;
  out.p.assign(block, scalar_from_double<T>(0.0));
  for (size_t i = 0; i < block; ++i) {
    T s = scalar_from_double<T>(0.0);
    for (int u = 0; u < t.alphabet; ++u) s += t.p[u * block + i];
    out.p[i] = s;
  }
  return out;
}

}  // namespace predictive
