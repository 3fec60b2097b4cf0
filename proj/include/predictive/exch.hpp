#pragma once

#include <optional>

#include "predictive/cat_exact.hpp"
#include "predictive/kernel.hpp"
#include "predictive/strategy.hpp"

namespace predictive {

// --- Dirichlet and kernel-based Dirichlet sequences -------------------------
//
// sigma_n(x) = (c nu + sum_i alpha_{x_i}) / (n + c); the classical Dirichlet
// sequence is the identity-kernel case. Exchangeable whenever alpha is a
// conditional distribution for nu (identity, partition, constant rules).
class DirichletStrategy : public Strategy, public CategoricalExact {
 public:
  DirichletStrategy(double c, Measure base, Kernel kernel,
                    std::optional<std::vector<Rational>> base_exact = {},
                    std::optional<Rational> c_exact = {});

  static DirichletStrategy classical(double c, Measure base);

  std::string family() const override {
    return kernel_.rule() == Kernel::Rule::Identity ? "dirichlet"
                                                    : "kernel_dirichlet";
  }
  SpaceTag space() const override { return base_.space(); }
  int alphabet_size() const override { return base_.alphabet_size(); }
  Measure predictive(std::span<const Observation> history) const override;

  const CategoricalExact* exact() const override {
    return space() == SpaceTag::Categorical ? this : nullptr;
  }
  int exact_alphabet_size() const override { return base_.alphabet_size(); }
  std::vector<Rational> predictive_exact(
      std::span<const int> history) const override;

  double concentration() const { return c_; }
  const Measure& base() const { return base_; }
  const Kernel& kernel() const { return kernel_; }

 private:
  double c_;
  Measure base_;
  Kernel kernel_;
  // exact mirrors (categorical spaces)
  Rational c_exact_;
  std::vector<Rational> base_exact_;
  std::optional<ExactCatKernel> kernel_exact_;
};

// --- Example-2 urn scheme ----------------------------------------------------
//
// The urn starts with m_j balls of color j. When a color in cell H is drawn,
// every color j in H is reinforced by m_j* = m nu({j}|H_j) balls, so m new
// balls enter the urn per draw. Counts are reals: m_j* is generally
// non-integral.
struct UrnParams {
  std::vector<Rational> initial_counts;
  std::vector<std::vector<int>> partition;  // cells of the color alphabet

  UrnParams(std::vector<Rational> counts, std::vector<std::vector<int>> cells);
  int colors() const { return static_cast<int>(initial_counts.size()); }
  int cell_of(int color) const;
  // m_j* for every j in the drawn color's cell, from the initial composition.
  std::vector<Rational> reinforcement(int drawn_color) const;
};

struct UrnState {
  std::vector<Rational> counts;
  Rational total() const;
};

Measure urn_predictive(const UrnState& state);
UrnState urn_update(const UrnState& state, int drawn_color,
                    const UrnParams& params);

class UrnStrategy : public Strategy, public CategoricalExact {
 public:
  explicit UrnStrategy(UrnParams params);

  std::string family() const override { return "urn"; }
  SpaceTag space() const override { return SpaceTag::Categorical; }
  int alphabet_size() const override { return params_.colors(); }
  Measure predictive(std::span<const Observation> history) const override;

  const CategoricalExact* exact() const override { return this; }
  int exact_alphabet_size() const override { return params_.colors(); }
  std::vector<Rational> predictive_exact(
      std::span<const int> history) const override;

  const UrnParams& params() const { return params_; }

 private:
  UrnParams params_;
};

// --- species sampling weight rules -------------------------------------------
struct SpeciesWeights {
  enum class Rule { PoissonDirichlet, Gnedin };
  Rule rule = Rule::PoissonDirichlet;
  double b = 0.0;
  double c = 1.0;

  SpeciesWeights(Rule rule_, double b_, double c_);

  // For PD case (ii) (b < 0, c = -m b): the almost-sure number of species.
  std::optional<int> species_cap() const { return cap_; }

 private:
  std::optional<int> cap_;
};

// Weights (p_1..p_k, q) at state (n, N_1..N_k); sum is 1 within 1e-12.
std::pair<std::vector<double>, double> species_weights(
    const SpeciesWeights& w, int n, std::span<const int> counts);

// sigma_n(x) = sum_j p_j delta_{x_j*} + q nu with nu nonatomic.
class SpeciesStrategy : public Strategy {
 public:
  SpeciesStrategy(SpeciesWeights weights, Measure base);

  std::string family() const override {
    return weights_.rule == SpeciesWeights::Rule::PoissonDirichlet
               ? "species_pd"
               : "species_gnedin";
  }
  SpaceTag space() const override { return SpaceTag::Real; }
  Measure predictive(std::span<const Observation> history) const override;

  const SpeciesWeights& weights() const { return weights_; }

 private:
  SpeciesWeights weights_;
  Measure base_;
};

// Probability that n draws are all distinct: prod_{i<n} (c + b i)/(c + i)
// for PD(b, c).
double pd_all_distinct_probability(const SpeciesWeights& w, int n);

// --- stick-breaking representation -------------------------------------------
struct StickBreakingParams {
  double c = 1.0;
  Measure base;
  Kernel kernel;
  int truncation = 1;
};

struct StickBreakingDraw {
  Measure measure;  // sum_{j<=J} V_j alpha(.|Z_j), renormalized
  double deficit;   // raw truncation deficit 1 - sum V_j
};

StickBreakingDraw stick_breaking_sample(const StickBreakingParams& p, Rng& rng);

}  // namespace predictive
