#pragma once

#include <span>
#include <utility>
#include <vector>

#include "predictive/density.hpp"
#include "predictive/event.hpp"
#include "predictive/observation.hpp"
#include "predictive/rng.hpp"

#include <nlohmann/json_fwd.hpp>

namespace predictive {

struct Atom {
  Observation point;
  double weight = 0.0;
};

// A probability measure on S: weighted atoms plus weighted density components
// over the implicit dominating measure (counting for categorical spaces,
// Lebesgue for real ones). Total mass must be 1 within 1e-12; components are
// kept unflattened, so a mixture remembers where each part came from.
// Immutable after construction and safe to share across threads.
class Measure {
 public:
  // -- constructors ----------------------------------------------------------
  static Measure point_mass(const Observation& x, int alphabet_size = 0);
  static Measure categorical(std::vector<double> pmf);
  static Measure uniform_categorical(int alphabet_size);
  static Measure gaussian(double mean, double var);
  static Measure stable(double gamma, double a, double b);
  static Measure tabulated(std::vector<double> x, std::vector<double> pdf);
  static Measure from_parts(SpaceTag space, int alphabet_size,
                            std::vector<Atom> atoms,
                            std::vector<std::pair<double, Density>> densities);

  SpaceTag space() const { return space_; }
  int alphabet_size() const { return alphabet_; }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<std::pair<double, Density>>& densities() const {
    return densities_;
  }
  bool has_atoms() const { return !atoms_.empty(); }
  bool has_densities() const { return !densities_.empty(); }

  // -- queries ---------------------------------------------------------------
  double prob(const Event& event) const;
  Measure condition(const Event& event) const;
  Observation sample(Rng& rng) const;

  // Point mass at x (atoms plus, on categorical spaces, pmf components).
  double mass_at(const Observation& x) const;
  // Lebesgue density at x from the density components (real space).
  double density_at(double x) const;
  double pair_density_at(const RealPair& p) const;
  // Chain-rule factor at x: the atom mass if x carries one, otherwise the
  // density. Zero when x carries no mass and no density covers it.
  double chain_value(const Observation& x) const;

  // Flattened pmf over the alphabet (categorical spaces only).
  std::vector<double> pmf() const;

  // Marginals of a real-pair measure.
  Measure marginal_x() const;
  Measure marginal_z() const;

  nlohmann::json to_json() const;
  static Measure from_json(const nlohmann::json& j);

  // Structural equality (exact weights, exact parameters).
  bool operator==(const Measure& other) const;

 private:
  Measure() = default;
  void validate() const;

  SpaceTag space_ = SpaceTag::Categorical;
  int alphabet_ = 0;
  std::vector<Atom> atoms_;
  std::vector<std::pair<double, Density>> densities_;
};

// Convex combination of measures: the weighted union of atom and density
// lists. Weights must be >= 0 and sum to 1 within 1e-12; all components must
// share the space tag.
Measure mix(std::span<const std::pair<double, Measure>> components);
Measure mix(std::initializer_list<std::pair<double, Measure>> components);

}  // namespace predictive
