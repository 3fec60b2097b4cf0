#pragma once

#include <gmpxx.h>

#include <cmath>
#include <span>
#include <vector>

namespace predictive {

// Exact rational scalar for the exact verification checkers. Conversion from
// double is exact (every binary64 value is rational).
using Rational = mpq_class;

inline Rational rational_from(double x) { return Rational(x); }

// mpq_class(num, den) does not canonicalize; this does.
inline Rational ratio(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}
inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

template <class T>
T scalar_from_double(double x);
template <>
inline double scalar_from_double<double>(double x) { return x; }
template <>
inline Rational scalar_from_double<Rational>(double x) { return Rational(x); }

inline Rational scalar_abs(const Rational& q) { return abs(q); }
inline double scalar_abs(double x) { return std::fabs(x); }

template <class T>
inline T pow_nonneg(T base, int k) {
  T r = scalar_from_double<T>(1.0);
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

template <class T>
inline std::vector<double> to_double_vec(std::span<const T> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(to_double(q));
  return out;
}

}  // namespace predictive
