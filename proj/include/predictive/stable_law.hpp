#pragma once

#include <complex>

#include "predictive/rng.hpp"

namespace predictive {

// Symmetric stable law S(a, b) with exponent gamma in (0, 2]: the law of
// a + b^{1/gamma} Z where Z has characteristic function exp(-|t|^gamma / 2).
// Hence cf(t) = exp(i t a - b |t|^gamma / 2). Note the /2 normalization:
// S(a, b) = N(a, b) at gamma = 2, and at gamma = 1 the Cauchy density is
// (2b/pi) / (b^2 + 4 (x-a)^2), so the standard Cauchy is S(0, 2).
struct StableLaw {
  double gamma = 2.0;
  double a = 0.0;  // location
  double b = 1.0;  // scale

  StableLaw() = default;
  StableLaw(double gamma_, double a_, double b_);

  std::complex<double> cf(double t) const;

  // Deterministic given the RNG state. gamma = 2 and gamma = 1 use the exact
  // Gaussian / Cauchy transforms; other exponents use the trigonometric
  // (Chambers-Mallows-Stuck) construction for symmetric variates.
  double sample(Rng& rng) const;

  // Closed form at gamma in {1, 2}; numerical characteristic-function
  // inversion otherwise.
  double pdf(double x) const;
  double cdf(double x) const;
};

}  // namespace predictive
