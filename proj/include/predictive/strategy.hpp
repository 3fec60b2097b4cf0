#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "predictive/measure.hpp"
#include "predictive/rational.hpp"
#include "predictive/rng.hpp"

namespace predictive {

// Exact-arithmetic capability of categorical strategies: the predictive pmf
// over the alphabet computed in rational arithmetic. Backs the exact
// verification checkers.
class CategoricalExact {
 public:
  virtual ~CategoricalExact() = default;
  virtual int exact_alphabet_size() const = 0;
  virtual std::vector<Rational> predictive_exact(
      std::span<const int> history) const = 0;
};

// Dominated-strategy capability: pointwise predictive Lebesgue density on the
// real line, used by the quadrature c.i.d. checker. Implementations throw
// DominationError when a predictive is not density-backed.
class DensityPredictive {
 public:
  virtual ~DensityPredictive() = default;
  virtual double predictive_density(std::span<const Observation> history,
                                    double z) const = 0;
};

// A strategy is the full collection of predictive distributions: sigma_0 is
// the marginal law of X_1 and sigma_n(x) the law of X_{n+1} given the history
// x of length n. predictive() must be total on finite histories and
// deterministic. Instances are immutable and shareable across threads.
class Strategy {
 public:
  virtual ~Strategy() = default;

  virtual std::string family() const = 0;
  virtual SpaceTag space() const = 0;
  virtual int alphabet_size() const { return 0; }

  virtual Measure predictive(std::span<const Observation> history) const = 0;

  // Optional capabilities.
  virtual const CategoricalExact* exact() const { return nullptr; }
  virtual const DensityPredictive* density() const { return nullptr; }
};

using StrategyPtr = std::shared_ptr<const Strategy>;

// A finite observed sequence with its chain-rule log probability.
struct Path {
  std::vector<Observation> points;
  double log_prob = 0.0;
  std::optional<uint64_t> seed;
};

// Sum of log chain-rule factors log sigma_{i-1}(x_1..x_{i-1})(x_i); -inf when
// any factor vanishes. Factors are point masses where the predictive carries
// an atom at the observed value and Lebesgue densities otherwise.
double path_log_prob(const Strategy& s, std::span<const Observation> points);

// Sequential sampler: x_1 ~ sigma_0, x_{i+1} ~ sigma_i(x_1..x_i).
// Deterministic given the RNG state; log_prob is filled via path_log_prob.
Path simulate_path(const Strategy& s, int n, Rng& rng);

std::vector<Observation> to_observations(std::span<const int> symbols);

}  // namespace predictive
