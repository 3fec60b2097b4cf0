#pragma once

#include <functional>

namespace predictive {

struct QuadResult {
  double value = 0.0;
  double abs_err = 0.0;
};

// Adaptive quadrature over [lo, hi]; either endpoint may be +/-infinity.
// Backed by GSL's adaptive Gauss-Kronrod routines (QAGS/QAGI family).
// Throws IntegrationError carrying the residual estimate when the requested
// absolute tolerance cannot be met.
QuadResult integrate(const std::function<double(double)>& f, double lo,
                     double hi, double abs_tol = 1e-8);

// Normal distribution helpers shared across the numerics.
double norm_pdf(double x, double mean = 0.0, double var = 1.0);
double norm_cdf(double x, double mean = 0.0, double var = 1.0);
double norm_cdf_inv(double p);  // standard normal quantile

}  // namespace predictive
