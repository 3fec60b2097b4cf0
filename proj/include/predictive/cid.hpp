#pragma once

#include <map>
#include <optional>

#include "predictive/cat_exact.hpp"
#include "predictive/kernel.hpp"
#include "predictive/strategy.hpp"

namespace predictive {

// --- exponential smoothing ----------------------------------------------------
//
// sigma_n(x) = q^n nu + (1 - q) sum_i q^{n-i} delta_{x_i}; c.i.d. but neither
// exchangeable nor stationary.
class ExpSmoothingStrategy : public Strategy, public CategoricalExact {
 public:
  ExpSmoothingStrategy(double q, Measure base,
                       std::optional<std::vector<Rational>> base_exact = {});

  std::string family() const override { return "exp_smoothing"; }
  SpaceTag space() const override { return base_.space(); }
  int alphabet_size() const override { return base_.alphabet_size(); }
  Measure predictive(std::span<const Observation> history) const override;

  const CategoricalExact* exact() const override {
    return space() == SpaceTag::Categorical ? this : nullptr;
  }
  int exact_alphabet_size() const override { return base_.alphabet_size(); }
  std::vector<Rational> predictive_exact(
      std::span<const int> history) const override;

  double q() const { return q_; }

 private:
  double q_;
  Measure base_;
  Rational q_exact_;
  std::vector<Rational> base_exact_;
};

// --- q_n schedules --------------------------------------------------------------
//
// History dependence is limited to a count statistic so schedules stay
// serializable.
struct QSchedule {
  enum class Kind { Constant, DirichletLike, ByN, ByCount };
  Kind kind = Kind::Constant;
  double q = 0.5;                 // Constant
  double c = 1.0;                 // DirichletLike: q_n = (n + c)/(n + 1 + c)
  std::vector<double> values;     // ByN / ByCount (last entry repeats)
  std::optional<Event> count_set; // ByCount: counts history points in the set

  static QSchedule constant(double q);
  static QSchedule dirichlet_like(double c);
  static QSchedule by_n(std::vector<double> values);
  static QSchedule by_count(Event set, std::vector<double> values);

  double at(int n, std::span<const Observation> history) const;
  Rational at_exact(int n, std::span<const int> history) const;
};

// --- recursive kernel update ----------------------------------------------------
//
// sigma_{n+1}(x, y) = q_n(x) sigma_n(x) + (1 - q_n(x)) alpha_n(.|y), with the
// partitions of alpha_n refining over n so X stays c.i.d. The last kernel
// repeats past the end of the list (a constant continuation, which refines
// itself).
class RecursiveUpdateStrategy : public Strategy, public CategoricalExact {
 public:
  RecursiveUpdateStrategy(Measure base, QSchedule q, std::vector<Kernel> kernels,
                          std::optional<std::vector<Rational>> base_exact = {});

  std::string family() const override { return "recursive_update"; }
  SpaceTag space() const override { return base_.space(); }
  int alphabet_size() const override { return base_.alphabet_size(); }
  Measure predictive(std::span<const Observation> history) const override;

  const CategoricalExact* exact() const override {
    return space() == SpaceTag::Categorical ? this : nullptr;
  }
  int exact_alphabet_size() const override { return base_.alphabet_size(); }
  std::vector<Rational> predictive_exact(
      std::span<const int> history) const override;

 private:
  const Kernel& kernel_at(size_t n) const {
    return kernels_[std::min(n, kernels_.size() - 1)];
  }

  Measure base_;
  QSchedule q_;
  std::vector<Kernel> kernels_;
  std::vector<Rational> base_exact_;
  std::vector<ExactCatKernel> kernels_exact_;
};

// --- change points ----------------------------------------------------------------
//
// Exchangeable via beta until the predictable stopping time T fires, then the
// smoothed recursion q_n sigma_n + (1 - q_n) delta_y (or the conditional
// variant sigma_n(x, .|H_y)).
struct StopRule {
  enum class Kind { CountThreshold, SingleHorizon, Table };
  Kind kind = Kind::CountThreshold;

  // CountThreshold: T = 1 + first n with #{i <= n : x_i in set} = k.
  Event set = Event::cat_full(0);
  int k = 1;

  // SingleHorizon: A_{n0} = {x in S^{n0} : #{i : x_i in set} in counts};
  // permutation-invariant by construction.
  int n0 = 0;
  std::vector<int> counts;

  // Table: explicit A_n entries (categorical); validated to be disjoint as
  // stop events.
  std::map<int, std::vector<std::vector<int>>> table;

  static StopRule count_threshold(Event set, int k);
  static StopRule single_horizon(int n0, Event set, std::vector<int> counts);
  static StopRule explicit_table(
      std::map<int, std::vector<std::vector<int>>> table);
  static StopRule never();

  bool fires_at(std::span<const Observation> prefix) const;  // prefix in A_n
  bool fires_at(std::span<const int> prefix) const;
  bool triggered_by(std::span<const Observation> history) const;  // T <= n+1
  bool triggered_by(std::span<const int> history) const;
};

enum class PostMode { Delta, Conditional };

class ChangePointStrategy : public Strategy, public CategoricalExact {
 public:
  ChangePointStrategy(StrategyPtr beta, StopRule stop, QSchedule q,
                      PostMode post = PostMode::Delta,
                      std::vector<Event> conditional_cells = {});

  std::string family() const override { return "change_point"; }
  SpaceTag space() const override { return beta_->space(); }
  int alphabet_size() const override { return beta_->alphabet_size(); }
  Measure predictive(std::span<const Observation> history) const override;

  const CategoricalExact* exact() const override;
  int exact_alphabet_size() const override { return beta_->alphabet_size(); }
  std::vector<Rational> predictive_exact(
      std::span<const int> history) const override;

  const StopRule& stop() const { return stop_; }

 private:
  int cell_index(const Observation& y) const;

  StrategyPtr beta_;
  StopRule stop_;
  QSchedule q_;
  PostMode post_;
  std::vector<Event> cells_;  // H for the conditional variant
};

// --- covariates ---------------------------------------------------------------------
//
// Observations are pairs (x, z). sigma_n(y) is the law of (U + V, V) with
// U ~ N(x_n - z_n, b_{n+1} - b_n) independent of V ~ N(0, 1 - b_{n+1});
// X is c.i.d. (in the strengthened sense) while Z is not identically
// distributed. The b-sequence must be supplied up to the needed horizon.
class CovariateStrategy : public Strategy {
 public:
  explicit CovariateStrategy(std::vector<double> b);

  std::string family() const override { return "covariate"; }
  SpaceTag space() const override { return SpaceTag::RealPair; }
  Measure predictive(std::span<const Observation> history) const override;

  const std::vector<double>& b() const { return b_; }

 private:
  std::vector<double> b_;  // b_1 < b_2 < ...; b_0 = 0 implicit
};

// Marginal variance of X_n (n >= 1): telescopes to 1 for every n.
double covariate_marginal_x_variance(const std::vector<double>& b, int n);

// Adversarial non-c.i.d. fixture: sigma_0 = uniform, sigma_1(x) = delta_x,
// sigma_n = uniform for n >= 2. The c.i.d. identity fails at n = 1 with
// residual 1 - 1/K.
class AdversarialStrategy : public Strategy, public CategoricalExact {
 public:
  explicit AdversarialStrategy(int alphabet);

  std::string family() const override { return "adversarial"; }
  SpaceTag space() const override { return SpaceTag::Categorical; }
  int alphabet_size() const override { return alphabet_; }
  Measure predictive(std::span<const Observation> history) const override;

  const CategoricalExact* exact() const override { return this; }
  int exact_alphabet_size() const override { return alphabet_; }
  std::vector<Rational> predictive_exact(
      std::span<const int> history) const override;

 private:
  int alphabet_;
};

}  // namespace predictive
