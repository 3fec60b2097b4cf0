#pragma once

#include <functional>
#include <memory>

#include "predictive/strategy.hpp"

namespace predictive {

// Bivariate copula density. Tabulated copulas interpolate bilinearly on a
// rectangular (u, v) grid and are validated against the uniform-marginal
// property on load.
class Copula {
 public:
  static Copula independence();
  static Copula gaussian(double rho);
  static Copula tabulated(std::vector<double> u, std::vector<double> v,
                          std::vector<double> values,  // row-major in u
                          double marginal_tol = 1e-3);

  double density(double u, double v) const;
  std::string name() const;

 private:
  struct Tab {
    std::vector<double> u, v, values;
  };
  enum class Kind { Independence, Gaussian, Tabulated };
  Kind kind_ = Kind::Independence;
  double rho_ = 0.0;
  std::shared_ptr<const Tab> tab_;
};

// Copula for step n (c_n, 1-based), optionally conditioned on the history
// observed so far (the Remark-after-Theorem-2 variant).
using CopulaProvider =
    std::function<Copula(int n, std::span<const Observation> history)>;

struct HmwGrid {
  int points = 4001;
  double tail_mass = 1e-9;  // initial grid covers f0 up to this tail mass
  double pad_fraction = 0.05;
};

// Hahn-Martin-Walker recursive copula update:
//   f_{n+1}(z | x, y) = c_{n+1}{F_n(z|x), F_n(y|x)} f_n(z|x).
// Dominated by Lebesgue measure; the data are c.i.d. for any copula sequence.
// CDFs are maintained on a uniform grid with monotone cubic interpolation;
// the grid range expands to cover observed points.
class HmwStrategy : public Strategy, public DensityPredictive {
 public:
  HmwStrategy(Measure f0, std::vector<Copula> copulas, HmwGrid grid = {});
  HmwStrategy(Measure f0, CopulaProvider provider, HmwGrid grid = {});

  std::string family() const override { return "hmw"; }
  SpaceTag space() const override { return SpaceTag::Real; }
  Measure predictive(std::span<const Observation> history) const override;

  const DensityPredictive* density() const override { return this; }
  double predictive_density(std::span<const Observation> history,
                            double z) const override;

  // Chain of levels after a fixed history; density/cdf evaluate f_n and F_n,
  // and child_density evaluates f_{n+1}(z | history, y) without building the
  // next level's CDF. Frames are immutable once built.
  class Frame {
   public:
    double density(double z) const;
    double cdf(double z) const;
    double child_density(double y, double z) const;
    double normalization_drift() const { return drift_; }
    int level() const { return level_; }

   private:
    friend class HmwStrategy;
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    double drift_ = 0.0;
    int level_ = 0;
  };

  Frame frame(std::span<const Observation> history) const;

 private:
  Copula copula_at(int n, std::span<const Observation> history) const;

  Measure f0_;
  std::vector<Copula> copulas_;
  CopulaProvider provider_;
  HmwGrid grid_;
};

}  // namespace predictive
