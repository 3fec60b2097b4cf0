#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "predictive/event.hpp"
#include "predictive/observation.hpp"
#include "predictive/pchip.hpp"
#include "predictive/rng.hpp"
#include "predictive/stable_law.hpp"

#include <nlohmann/json_fwd.hpp>

namespace predictive {

// --- named parametric density families over the implicit dominating measure
// (counting measure on finite alphabets, Lebesgue on the reals) -------------

struct CategoricalPmf {
  std::vector<double> p;  // over the alphabet; sums to 1
};

struct GaussianDensity {
  double mean = 0.0;
  double var = 1.0;
};

struct StableDensity {
  StableLaw law;
};

// Density tabulated on a strictly increasing grid; zero outside the grid.
// The CDF is precomputed and both pdf and cdf are interpolated with
// shape-preserving cubics.
class TabulatedDensity {
 public:
  TabulatedDensity(std::vector<double> x, std::vector<double> pdf);
  TabulatedDensity(std::vector<double> x, std::vector<double> pdf,
                   std::vector<double> cdf);

  double pdf_at(double x) const;
  double cdf_at(double x) const;
  double cdf_inv(double p) const;
  const std::vector<double>& grid() const;
  const std::vector<double>& pdf_values() const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

// Law of the pair (U + V, V) with U ~ N(mean_u, var_u) independent of
// V ~ N(0, var_v); the predictive form of the covariate strategy.
struct PairGaussianDensity {
  double mean_u = 0.0;
  double var_u = 1.0;
  double var_v = 1.0;
};

class Density;

// Conditional restriction of another component to an event, renormalized.
struct RestrictedDensity {
  std::shared_ptr<const Density> base;
  Event domain;
  double base_mass = 1.0;  // base probability of `domain`
};

using DensityKind = std::variant<CategoricalPmf, GaussianDensity, StableDensity,
                                 TabulatedDensity, PairGaussianDensity,
                                 RestrictedDensity>;

// One normalized density component of a Measure.
class Density {
 public:
  Density(DensityKind kind) : kind_(std::move(kind)) {}

  SpaceTag space() const;
  int alphabet_size() const;  // 0 unless categorical

  double mass(const Event& e) const;     // probability of the event
  double density_at(double x) const;     // real spaces
  double pair_density_at(const RealPair& p) const;
  double pmf_at(int i) const;            // categorical
  Observation sample(Rng& rng) const;

  // Restriction of this component to `e` (must have positive mass).
  Density restrict(const Event& e) const;

  const DensityKind& kind() const { return kind_; }

  nlohmann::json to_json() const;
  static Density from_json(const nlohmann::json& j);

  bool operator==(const Density& other) const;

 private:
  DensityKind kind_;
};

}  // namespace predictive
