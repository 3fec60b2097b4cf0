#pragma once

#include <optional>

#include "predictive/cat_exact.hpp"
#include "predictive/stable_law.hpp"
#include "predictive/strategy.hpp"

namespace predictive {

// --- symmetric-stable autoregression (Theorem 5) -----------------------------
//
// Error law mu = S(a, b), f(x) = -a + c x with |c| < 1, so the one-step
// predictive is S(c x_n, b). The stationary marginal is
// nu = S(0, b / (1 - |c|^gamma)).
struct StableArParams {
  double gamma = 2.0;
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;

  StableArParams(double gamma_, double a_, double b_, double c_);
  double stationary_scale() const;
};

class StableArStrategy : public Strategy, public DensityPredictive {
 public:
  explicit StableArStrategy(StableArParams p);

  std::string family() const override { return "stable_ar"; }
  SpaceTag space() const override { return SpaceTag::Real; }
  Measure predictive(std::span<const Observation> history) const override;

  const DensityPredictive* density() const override { return this; }
  double predictive_density(std::span<const Observation> history,
                            double z) const override;

  const StableArParams& params() const { return params_; }

 private:
  StableArParams params_;
};

struct StableStationarityResult {
  // Sup over the t grid of |cf of one AR step applied to the marginal - cf of
  // the marginal|. Exactly 0 when the marginal scale is the Theorem-5 fixed
  // point, because |c|^gamma s + b = s then holds symbolically.
  double analytic_cf_deviation = 0.0;
  bool symbolic_identity = false;
  // Floating-point residual of the scale identity, reported as a diagnostic.
  double coeff_residual = 0.0;
  // Monte Carlo branch: empirical cf of one AR step applied to marginal
  // samples, against the marginal cf.
  double mc_cf_deviation = 0.0;
  size_t mc_samples = 0;
  uint64_t seed = 0;
};

StableStationarityResult verify_stable_stationarity(
    const StableArParams& p, std::span<const double> t_grid,
    size_t mc_samples = 0, uint64_t seed = 1, bool parallel = true,
    std::optional<double> marginal_scale = {});

// Convolution identity Int S(x, b; A) S(0, r; dx) = S(0, b + r; A) checked by
// quadrature over interval events; returns the max absolute deviation.
double stable_convolution_residual(double gamma, double b, double r,
                                   std::span<const Interval> events,
                                   double quad_tol = 1e-8);

// --- cyclic-permutation Markov chains (Example 8) -----------------------------
//
// h > 0 is a pmf on S^n; g is its cyclic symmetrization, which satisfies the
// block symmetry g(x, y) = g(y, x). The strategy draws (X_1..X_n) from g and
// continues as an order-(n-1) Markov chain.
class CyclicMarkovStrategy : public Strategy, public CategoricalExact {
 public:
  CyclicMarkovStrategy(int alphabet, int block,
                       const std::vector<double>& h_values);
  CyclicMarkovStrategy(int alphabet, int block, std::vector<Rational> h_exact);

  std::string family() const override { return "cyclic_markov"; }
  SpaceTag space() const override { return SpaceTag::Categorical; }
  int alphabet_size() const override { return alphabet_; }
  Measure predictive(std::span<const Observation> history) const override;

  const CategoricalExact* exact() const override { return this; }
  int exact_alphabet_size() const override { return alphabet_; }
  std::vector<Rational> predictive_exact(
      std::span<const int> history) const override;

  // g as a flat table (x_1 most significant).
  const std::vector<Rational>& g() const { return g_; }

 private:
  void build(std::vector<Rational> h);

  int alphabet_ = 0;
  int block_ = 0;  // n = order + 1
  std::vector<Rational> g_;
  // marg_[j][idx] = sum over the trailing n-j coordinates of g, j = 0..n
  std::vector<std::vector<Rational>> marg_;
};

// Real-space variant: h tabulated on a shared axis grid with trapezoid
// marginalization. Exactness is only achievable on finite alphabets; this
// gives the measure-generic construction a usable numerical form.
class CyclicMarkovGridStrategy : public Strategy {
 public:
  CyclicMarkovGridStrategy(std::vector<double> axis, int block,
                           std::vector<double> h_values);

  std::string family() const override { return "cyclic_markov_grid"; }
  SpaceTag space() const override { return SpaceTag::Real; }
  Measure predictive(std::span<const Observation> history) const override;

 private:
  std::vector<double> conditional_slice(
      std::span<const Observation> tail) const;

  std::vector<double> axis_;
  int block_ = 0;
  std::vector<double> g_;  // symmetrized, row-major over axis^block
};

// First-order Markov stationarity criterion: residual of
// Int sigma_1(x, .) sigma_0(dx) = sigma_0 by table summation (categorical).
double markov_invariance_residual(const Strategy& s);

}  // namespace predictive
