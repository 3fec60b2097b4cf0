#include "predictive/hmw.hpp"

#include <algorithm>
#include <cmath>

#include "predictive/errors.hpp"
#include "predictive/pchip.hpp"
#include "predictive/quadrature.hpp"

namespace predictive {

// --- Copula ---------------------------------------------------------------------

Copula Copula::independence() { return Copula(); }

Copula Copula::gaussian(double rho) {
  if (!(rho > -1.0 && rho < 1.0))
    throw ParamError("gaussian copula needs rho in (-1, 1)");
  Copula c;
  c.kind_ = Kind::Gaussian;
  c.rho_ = rho;
  return c;
}

Copula Copula::tabulated(std::vector<double> u, std::vector<double> v,
                         std::vector<double> values, double marginal_tol) {
  if (u.size() < 2 || v.size() < 2 || values.size() != u.size() * v.size())
    throw ParamError("tabulated copula needs a full (u, v) grid");
  for (double x : values)
    if (x < 0.0 || !std::isfinite(x))
      throw ParamError("copula density values must be finite and >= 0");
  auto tab = std::make_shared<Tab>();
  tab->u = std::move(u);
  tab->v = std::move(v);
  tab->values = std::move(values);
  Copula c;
  c.kind_ = Kind::Tabulated;
  c.tab_ = tab;
  // Uniform-marginal property: the u-integral at each tabulated v must be 1.
  // The interpolant is piecewise linear in u, so the trapezoid rule is exact.
  for (size_t j = 0; j < tab->v.size(); ++j) {
    double integral = 0.0;
    for (size_t i = 0; i + 1 < tab->u.size(); ++i) {
      const double f0 = tab->values[i * tab->v.size() + j];
      const double f1 = tab->values[(i + 1) * tab->v.size() + j];
      integral += 0.5 * (f0 + f1) * (tab->u[i + 1] - tab->u[i]);
    }
    if (std::fabs(integral - 1.0) > marginal_tol)
      throw ParamError("tabulated copula violates the uniform-marginal property");
  }
  return c;
}

namespace {
double bilinear(const std::vector<double>& xs, const std::vector<double>& ys,
                const std::vector<double>& z, double x, double y) {
  auto locate = [](const std::vector<double>& g, double t) {
    if (t <= g.front()) return size_t{0};
    if (t >= g.back()) return g.size() - 2;
    return static_cast<size_t>(std::upper_bound(g.begin(), g.end(), t) -
                               g.begin()) - 1;
  };
  const size_t i = locate(xs, x), j = locate(ys, y);
  const double tx = std::clamp((x - xs[i]) / (xs[i + 1] - xs[i]), 0.0, 1.0);
  const double ty = std::clamp((y - ys[j]) / (ys[j + 1] - ys[j]), 0.0, 1.0);
  const size_t n = ys.size();
  const double z00 = z[i * n + j], z01 = z[i * n + j + 1];
  const double z10 = z[(i + 1) * n + j], z11 = z[(i + 1) * n + j + 1];
  return (1 - tx) * ((1 - ty) * z00 + ty * z01) +
         tx * ((1 - ty) * z10 + ty * z11);
}
}  // namespace

double Copula::density(double u, double v) const {
  switch (kind_) {
    case Kind::Independence:
      return 1.0;
    case Kind::Gaussian: {
      const double uu = std::clamp(u, 1e-15, 1.0 - 1e-15);
      const double vv = std::clamp(v, 1e-15, 1.0 - 1e-15);
      const double x = norm_cdf_inv(uu), y = norm_cdf_inv(vv);
      const double r2 = rho_ * rho_;
      return std::exp(-(r2 * (x * x + y * y) - 2.0 * rho_ * x * y) /
                      (2.0 * (1.0 - r2))) /
             std::sqrt(1.0 - r2);
    }
    case Kind::Tabulated:
      return std::max(0.0, bilinear(tab_->u, tab_->v, tab_->values, u, v));
  }
  return 1.0;
}

std::string Copula::name() const {
  switch (kind_) {
    case Kind::Independence: return "independence";
    case Kind::Gaussian: return "gaussian";
    case Kind::Tabulated: return "tabulated";
  }
  return "?";
}

// --- HmwStrategy ------------------------------------------------------------------

struct HmwStrategy::Frame::Impl {
  std::vector<double> grid;
  // Per level k: density evaluator (product formula) and CDF interpolant.
  std::vector<std::function<double(double)>> f;
  std::vector<std::function<double(double)>> F;
  Copula next_copula;  // c_{n+1} for child_density
};

double HmwStrategy::Frame::density(double z) const { return impl_->f.back()(z); }
double HmwStrategy::Frame::cdf(double z) const { return impl_->F.back()(z); }
double HmwStrategy::Frame::child_density(double y, double z) const {
  // f_{n+1}(z | x, y) = c_{n+1}{F_n(z|x), F_n(y|x)} f_n(z|x)
  return impl_->next_copula.density(impl_->F.back()(z), impl_->F.back()(y)) *
         impl_->f.back()(z);
}

HmwStrategy::HmwStrategy(Measure f0, std::vector<Copula> copulas, HmwGrid grid)
    : f0_(std::move(f0)), copulas_(std::move(copulas)), grid_(grid) {
  if (f0_.space() != SpaceTag::Real || f0_.has_atoms())
    throw DominationError("HMW needs a density-backed real f0");
  if (copulas_.empty()) throw ParamError("HMW needs at least one copula");
}

HmwStrategy::HmwStrategy(Measure f0, CopulaProvider provider, HmwGrid grid)
    : f0_(std::move(f0)), provider_(std::move(provider)), grid_(grid) {
  if (f0_.space() != SpaceTag::Real || f0_.has_atoms())
    throw DominationError("HMW needs a density-backed real f0");
  if (!provider_) throw ParamError("HMW needs a copula provider");
}

Copula HmwStrategy::copula_at(int n,
                              std::span<const Observation> history) const {
  if (provider_) return provider_(n, history);
  return copulas_[std::min<size_t>(n - 1, copulas_.size() - 1)];
}

HmwStrategy::Frame HmwStrategy::frame(
    std::span<const Observation> history) const {
  auto impl = std::make_shared<Frame::Impl>();

  // Grid range: cover f0 to the requested tail mass, expanded over observed
  // points; uniform spacing.
  double lo, hi;
  {
    // invert the f0 CDF at tail_mass/2 by bisection over a wide bracket
    auto cdf0 = [&](double x) {
      return f0_.prob(Event::interval(-std::numeric_limits<double>::infinity(),
                                      x, false, true));
    };
    double a = -1.0, b = 1.0;
    while (cdf0(a) > grid_.tail_mass / 2) a *= 2.0;
    while (cdf0(b) < 1.0 - grid_.tail_mass / 2) b *= 2.0;
    lo = a;
    hi = b;
  }
  for (const auto& o : history) {
    lo = std::min(lo, o.real_value());
    hi = std::max(hi, o.real_value());
  }
  const double pad = grid_.pad_fraction * (hi - lo);
  lo -= pad;
  hi += pad;
  const int np = grid_.points;
  impl->grid.resize(np);
  const double h = (hi - lo) / (np - 1);
  for (int i = 0; i < np; ++i) impl->grid[i] = lo + i * h;

  // level 0
  const Measure f0 = f0_;
  impl->f.push_back([f0](double z) { return f0.density_at(z); });
  if (f0_.densities().size() == 1 &&
      std::holds_alternative<GaussianDensity>(f0_.densities()[0].second.kind())) {
    const auto g = std::get<GaussianDensity>(f0_.densities()[0].second.kind());
    impl->F.push_back([g](double z) { return norm_cdf(z, g.mean, g.var); });
  } else {
    const Measure f0c = f0_;
    impl->F.push_back([f0c](double z) {
      return f0c.prob(Event::interval(-std::numeric_limits<double>::infinity(),
                                      z, false, true));
    });
  }

  double max_drift = 0.0;
  for (size_t k = 1; k <= history.size(); ++k) {
    const auto prefix = history.subspan(0, k - 1);
    const Copula ck = copula_at(static_cast<int>(k), prefix);
    const double y = history[k - 1].real_value();
    const auto f_prev = impl->f.back();
    const auto F_prev = impl->F.back();
    if (!(f_prev(y) > 0.0))
      throw SupportError("observation fell where the predictive density is 0");
    const double u = F_prev(y);
    auto f_k = [f_prev, F_prev, ck, u](double z) {
      return ck.density(F_prev(z), u) * f_prev(z);
    };
    // CDF on the grid: per-cell 3-point Gauss-Legendre on the product-formula
    // density, accumulated left to right.
    std::vector<double> cdf(np, 0.0);
    static constexpr double kGx = 0.7745966692414834;  // sqrt(3/5)
    static constexpr double kW0 = 8.0 / 9.0, kW1 = 5.0 / 9.0;
    for (int i = 1; i < np; ++i) {
      const double a = impl->grid[i - 1], b = impl->grid[i];
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      const double cell =
          half * (kW0 * f_k(mid) + kW1 * f_k(mid - half * kGx) +
                  kW1 * f_k(mid + half * kGx));
      cdf[i] = cdf[i - 1] + cell;
    }
    const double total = cdf[np - 1];
    max_drift = std::max(max_drift, std::fabs(total - 1.0));
    if (std::fabs(total - 1.0) > 1e-4)
      throw NumericalDriftError("HMW density normalization drifted past 1e-4");
    for (auto& v : cdf) v /= total;
    auto interp = std::make_shared<Pchip>(impl->grid, std::move(cdf));
    const double glo = impl->grid.front(), ghi = impl->grid.back();
    impl->F.push_back([interp, glo, ghi](double z) {
      if (z <= glo) return 0.0;
      if (z >= ghi) return 1.0;
      return std::clamp((*interp)(z), 0.0, 1.0);
    });
    impl->f.push_back(std::move(f_k));
  }

  impl->next_copula =
      copula_at(static_cast<int>(history.size()) + 1, history);
  Frame fr;
  fr.impl_ = std::move(impl);
  fr.drift_ = max_drift;
  fr.level_ = static_cast<int>(history.size());
  return fr;
}

Measure HmwStrategy::predictive(std::span<const Observation> history) const {
  if (history.empty()) return f0_;
  const Frame fr = frame(history);
  const auto& grid = fr.impl_->grid;
  std::vector<double> pdf(grid.size()), cdf(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    pdf[i] = fr.density(grid[i]);
    cdf[i] = fr.cdf(grid[i]);
  }
  return Measure::from_parts(
      SpaceTag::Real, 0, {},
      {{1.0, Density(TabulatedDensity(grid, std::move(pdf), std::move(cdf)))}});
}

double HmwStrategy::predictive_density(std::span<const Observation> history,
                                       double z) const {
  if (history.empty()) return f0_.density_at(z);
  return frame(history).density(z);
}

}  // namespace predictive
