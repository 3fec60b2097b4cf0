#include "predictive/density.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "predictive/errors.hpp"
#include "predictive/quadrature.hpp"

namespace predictive {

using nlohmann::json;

// --- TabulatedDensity -------------------------------------------------------

struct TabulatedDensity::Impl {
  std::vector<double> x, pdf, cdf;
  Pchip pdf_interp, cdf_interp;
};

namespace {

std::shared_ptr<const TabulatedDensity::Impl> make_tab_impl(
    std::vector<double> x, std::vector<double> pdf, std::vector<double> cdf) {
  if (x.size() < 2 || x.size() != pdf.size())
    throw ParamError("tabulated density needs matching grid/pdf of size >= 2");
  for (size_t i = 0; i + 1 < x.size(); ++i)
    if (!(x[i] < x[i + 1])) throw ParamError("tabulated grid must increase");
  for (double v : pdf)
    if (v < 0.0 || !std::isfinite(v))
      throw ParamError("tabulated pdf values must be finite and >= 0");
  auto impl = std::make_shared<TabulatedDensity::Impl>();
  impl->x = std::move(x);
  impl->pdf = std::move(pdf);
  if (cdf.empty()) {
    // Composite trapezoid is enough here; high-accuracy grids (HMW) supply
    // their own CDF column computed with per-cell Gauss rules.
    cdf.assign(impl->x.size(), 0.0);
    for (size_t i = 1; i < impl->x.size(); ++i)
      cdf[i] = cdf[i - 1] + 0.5 * (impl->pdf[i] + impl->pdf[i - 1]) *
                                (impl->x[i] - impl->x[i - 1]);
  }
  const double total = cdf.back();
  if (!(total > 0.0)) throw NormalizationError("tabulated density has zero mass");
  if (std::fabs(total - 1.0) > 1e-6) {
    for (auto& v : impl->pdf) v /= total;
    for (auto& v : cdf) v /= total;
  } else {
    for (auto& v : cdf) v /= total;
  }
  impl->cdf = std::move(cdf);
  impl->pdf_interp = Pchip(impl->x, impl->pdf);
  impl->cdf_interp = Pchip(impl->x, impl->cdf);
  return impl;
}

}  // namespace

TabulatedDensity::TabulatedDensity(std::vector<double> x,
                                   std::vector<double> pdf)
    : impl_(make_tab_impl(std::move(x), std::move(pdf), {})) {}

TabulatedDensity::TabulatedDensity(std::vector<double> x,
                                   std::vector<double> pdf,
                                   std::vector<double> cdf)
    : impl_(make_tab_impl(std::move(x), std::move(pdf), std::move(cdf))) {}

double TabulatedDensity::pdf_at(double x) const {
  if (x < impl_->x.front() || x > impl_->x.back()) return 0.0;
  return std::max(0.0, impl_->pdf_interp(x));
}

double TabulatedDensity::cdf_at(double x) const {
  if (x <= impl_->x.front()) return 0.0;
  if (x >= impl_->x.back()) return 1.0;
  return std::clamp(impl_->cdf_interp(x), 0.0, 1.0);
}

double TabulatedDensity::cdf_inv(double p) const {
  p = std::clamp(p, 0.0, 1.0);
  const auto& x = impl_->x;
  double lo = x.front(), hi = x.back();
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::fabs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf_at(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

const std::vector<double>& TabulatedDensity::grid() const { return impl_->x; }
const std::vector<double>& TabulatedDensity::pdf_values() const {
  return impl_->pdf;
}

// --- Density visitors -------------------------------------------------------

SpaceTag Density::space() const {
  return std::visit(
      [](const auto& k) -> SpaceTag {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, CategoricalPmf>)
          return SpaceTag::Categorical;
        else if constexpr (std::is_same_v<T, PairGaussianDensity>)
          return SpaceTag::RealPair;
        else if constexpr (std::is_same_v<T, RestrictedDensity>)
          return k.base->space();
        else
          return SpaceTag::Real;
      },
      kind_);
}

int Density::alphabet_size() const {
  if (const auto* pmf = std::get_if<CategoricalPmf>(&kind_))
    return static_cast<int>(pmf->p.size());
  if (const auto* r = std::get_if<RestrictedDensity>(&kind_))
    return r->base->alphabet_size();
  return 0;
}

double Density::mass(const Event& e) const {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, CategoricalPmf>) {
          if (e.space() != SpaceTag::Categorical)
            throw SpaceMismatch("categorical component, non-categorical event");
          double s = 0.0;
          for (size_t i = 0; i < k.p.size() && i < e.mask().size(); ++i)
            if (e.mask()[i]) s += k.p[i];
          return s;
        } else if constexpr (std::is_same_v<T, GaussianDensity>) {
          double s = 0.0;
          for (const auto& iv : e.intervals())
            s += norm_cdf(iv.hi, k.mean, k.var) - norm_cdf(iv.lo, k.mean, k.var);
          return s;
        } else if constexpr (std::is_same_v<T, StableDensity>) {
          double s = 0.0;
          for (const auto& iv : e.intervals()) {
            const double hi = std::isinf(iv.hi) ? 1.0 : k.law.cdf(iv.hi);
            const double lo = std::isinf(iv.lo) ? 0.0 : k.law.cdf(iv.lo);
            s += hi - lo;
          }
          return s;
        } else if constexpr (std::is_same_v<T, TabulatedDensity>) {
          double s = 0.0;
          for (const auto& iv : e.intervals())
            s += k.cdf_at(iv.hi) - k.cdf_at(iv.lo);
          return s;
        } else if constexpr (std::is_same_v<T, PairGaussianDensity>) {
          throw SpaceMismatch("events on real pairs are not supported");
        } else {  // RestrictedDensity
          return k.base->mass(e.intersect(k.domain)) / k.base_mass;
        }
      },
      kind_);
}

double Density::density_at(double x) const {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, GaussianDensity>)
          return norm_pdf(x, k.mean, k.var);
        else if constexpr (std::is_same_v<T, StableDensity>)
          return k.law.pdf(x);
        else if constexpr (std::is_same_v<T, TabulatedDensity>)
          return k.pdf_at(x);
        else if constexpr (std::is_same_v<T, RestrictedDensity>)
          return k.domain.contains_real(x) ? k.base->density_at(x) / k.base_mass
                                           : 0.0;
        else
          throw SpaceMismatch("density_at requires a real-space component");
      },
      kind_);
}

double Density::pair_density_at(const RealPair& p) const {
  if (const auto* k = std::get_if<PairGaussianDensity>(&kind_))
    return norm_pdf(p.x - p.z, k->mean_u, k->var_u) *
           norm_pdf(p.z, 0.0, k->var_v);
  throw SpaceMismatch("pair_density_at requires a real-pair component");
}

double Density::pmf_at(int i) const {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, CategoricalPmf>) {
          return (i >= 0 && i < static_cast<int>(k.p.size())) ? k.p[i] : 0.0;
        } else if constexpr (std::is_same_v<T, RestrictedDensity>) {
          if (k.base->space() != SpaceTag::Categorical)
            throw SpaceMismatch("pmf_at requires a categorical component");
          Observation o = Observation::cat(i);
          return k.domain.contains(o) ? k.base->pmf_at(i) / k.base_mass : 0.0;
        } else {
          throw SpaceMismatch("pmf_at requires a categorical component");
        }
      },
      kind_);
}

namespace {

// Inverse CDF used for sampling restricted components.
double cdf_inv_of(const Density& d, double p);

double cdf_of(const Density& d, double x) {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, GaussianDensity>)
          return norm_cdf(x, k.mean, k.var);
        else if constexpr (std::is_same_v<T, StableDensity>)
          return k.law.cdf(x);
        else if constexpr (std::is_same_v<T, TabulatedDensity>)
          return k.cdf_at(x);
        else
          throw SpaceMismatch("cdf undefined for this component");
      },
      d.kind());
}

double cdf_inv_of(const Density& d, double p) {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, GaussianDensity>) {
          return k.mean + std::sqrt(k.var) * norm_cdf_inv(p);
        } else if constexpr (std::is_same_v<T, StableDensity>) {
          const StableLaw& law = k.law;
          if (law.gamma == 2.0)
            return law.a + std::sqrt(law.b) * norm_cdf_inv(p);
          if (law.gamma == 1.0)
            return law.a + 0.5 * law.b * std::tan(M_PI * (p - 0.5));
          double w = std::pow(law.b, 1.0 / law.gamma) + 1.0;
          while (law.cdf(law.a - w) > p || law.cdf(law.a + w) < p) w *= 2.0;
          double lo = law.a - w, hi = law.a + w;
          for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + std::fabs(lo));
               ++it) {
            const double mid = 0.5 * (lo + hi);
            (law.cdf(mid) < p ? lo : hi) = mid;
          }
          return 0.5 * (lo + hi);
        } else if constexpr (std::is_same_v<T, TabulatedDensity>) {
          return k.cdf_inv(p);
        } else {
          throw SpaceMismatch("cdf_inv undefined for this component");
        }
      },
      d.kind());
}

}  // namespace

Observation Density::sample(Rng& rng) const {
  return std::visit(
      [&](const auto& k) -> Observation {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, CategoricalPmf>) {
          const double u = rng.u01();
          double cum = 0.0;
          for (size_t i = 0; i < k.p.size(); ++i) {
            cum += k.p[i];
            if (u < cum) return Observation::cat(static_cast<int>(i));
          }
          return Observation::cat(static_cast<int>(k.p.size()) - 1);
        } else if constexpr (std::is_same_v<T, GaussianDensity>) {
          return Observation::real(k.mean + std::sqrt(k.var) * rng.normal());
        } else if constexpr (std::is_same_v<T, StableDensity>) {
          return Observation::real(k.law.sample(rng));
        } else if constexpr (std::is_same_v<T, TabulatedDensity>) {
          return Observation::real(k.cdf_inv(rng.u01_open()));
        } else if constexpr (std::is_same_v<T, PairGaussianDensity>) {
          const double v = std::sqrt(k.var_v) * rng.normal();
          const double u = k.mean_u + std::sqrt(k.var_u) * rng.normal();
          return Observation::pair(u + v, v);
        } else {  // RestrictedDensity
          if (k.base->space() == SpaceTag::Categorical) {
            // restricted categorical: walk the renormalized pmf
            const int n = k.base->alphabet_size();
            const double u = rng.u01();
            double cum = 0.0;
            for (int i = 0; i < n; ++i) {
              const double pi = pmf_at(i);
              cum += pi;
              if (u < cum) return Observation::cat(i);
            }
            return Observation::cat(n - 1);
          }
          // pick an interval proportionally to its conditional mass, then
          // invert the base CDF inside it
          const double u = rng.u01();
          double cum = 0.0;
          const auto& ivs = k.domain.intervals();
          for (size_t i = 0; i < ivs.size(); ++i) {
            const double plo =
                std::isinf(ivs[i].lo) ? 0.0 : cdf_of(*k.base, ivs[i].lo);
            const double phi =
                std::isinf(ivs[i].hi) ? 1.0 : cdf_of(*k.base, ivs[i].hi);
            const double w = (phi - plo) / k.base_mass;
            if (u < cum + w || i + 1 == ivs.size()) {
              const double frac = std::clamp((u - cum) / w, 0.0, 1.0);
              double p = plo + frac * (phi - plo);
              p = std::clamp(p, 1e-15, 1.0 - 1e-15);
              double x = cdf_inv_of(*k.base, p);
              x = std::clamp(x, ivs[i].lo, ivs[i].hi);
              return Observation::real(x);
            }
            cum += w;
          }
          throw SupportError("restricted component has empty domain");
        }
      },
      kind_);
}

Density Density::restrict(const Event& e) const {
  if (space() == SpaceTag::Categorical) {
    const int n = alphabet_size();
    std::vector<double> p(n, 0.0);
    double total = 0.0;
    for (int i = 0; i < n; ++i)
      if (e.mask()[i]) total += (p[i] = pmf_at(i));
    if (!(total > 0.0))
      throw ConditioningError("conditioning on a zero-probability event");
    for (auto& v : p) v /= total;
    return Density(CategoricalPmf{std::move(p)});
  }
  // compose restrictions so nesting stays flat
  if (const auto* r = std::get_if<RestrictedDensity>(&kind_)) {
    Event combined = r->domain.intersect(e);
    const double m = r->base->mass(combined);
    if (!(m > 0.0))
      throw ConditioningError("conditioning on a zero-probability event");
    return Density(RestrictedDensity{r->base, std::move(combined), m});
  }
  const double m = mass(e);
  if (!(m > 0.0))
    throw ConditioningError("conditioning on a zero-probability event");
  return Density(RestrictedDensity{std::make_shared<Density>(*this), e, m});
}

bool Density::operator==(const Density& other) const {
  if (kind_.index() != other.kind_.index()) return false;
  return std::visit(
      [&](const auto& k) -> bool {
        using T = std::decay_t<decltype(k)>;
        const auto& o = std::get<T>(other.kind_);
        if constexpr (std::is_same_v<T, CategoricalPmf>) {
          return k.p == o.p;
        } else if constexpr (std::is_same_v<T, GaussianDensity>) {
          return k.mean == o.mean && k.var == o.var;
        } else if constexpr (std::is_same_v<T, StableDensity>) {
          return k.law.gamma == o.law.gamma && k.law.a == o.law.a &&
                 k.law.b == o.law.b;
        } else if constexpr (std::is_same_v<T, TabulatedDensity>) {
          return k.grid() == o.grid() && k.pdf_values() == o.pdf_values();
        } else if constexpr (std::is_same_v<T, PairGaussianDensity>) {
          return k.mean_u == o.mean_u && k.var_u == o.var_u && k.var_v == o.var_v;
        } else {
          return false;  // restricted components compare by identity only
        }
      },
      kind_);
}

// --- JSON -------------------------------------------------------------------

json Density::to_json() const {
  return std::visit(
      [&](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, CategoricalPmf>) {
          return {{"family", "pmf"}, {"params", {{"p", k.p}}}};
        } else if constexpr (std::is_same_v<T, GaussianDensity>) {
          return {{"family", "gaussian"},
                  {"params", {{"mean", k.mean}, {"var", k.var}}}};
        } else if constexpr (std::is_same_v<T, StableDensity>) {
          return {{"family", "stable"},
                  {"params",
                   {{"gamma", k.law.gamma}, {"a", k.law.a}, {"b", k.law.b}}}};
        } else if constexpr (std::is_same_v<T, TabulatedDensity>) {
          return {{"family", "tabulated"},
                  {"params", {{"x", k.grid()}, {"pdf", k.pdf_values()}}}};
        } else if constexpr (std::is_same_v<T, PairGaussianDensity>) {
          return {{"family", "pair_gaussian"},
                  {"params",
                   {{"mean_u", k.mean_u}, {"var_u", k.var_u}, {"var_v", k.var_v}}}};
        } else {  // RestrictedDensity
          json ivs = json::array();
          for (const auto& iv : k.domain.intervals())
            ivs.push_back({{"lo", iv.lo},
                           {"hi", iv.hi},
                           {"lo_closed", iv.lo_closed},
                           {"hi_closed", iv.hi_closed}});
          return {{"family", "restricted"},
                  {"params", {{"base", k.base->to_json()}, {"domain", ivs}}}};
        }
      },
      kind_);
}

Density Density::from_json(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  const json& p = j.at("params");
  if (family == "pmf")
    return Density(CategoricalPmf{p.at("p").get<std::vector<double>>()});
  if (family == "gaussian")
    return Density(GaussianDensity{p.at("mean").get<double>(),
                                   p.at("var").get<double>()});
  if (family == "stable")
    return Density(StableDensity{StableLaw(p.at("gamma").get<double>(),
                                           p.at("a").get<double>(),
                                           p.at("b").get<double>())});
  if (family == "tabulated")
    return Density(TabulatedDensity(p.at("x").get<std::vector<double>>(),
                                    p.at("pdf").get<std::vector<double>>()));
  if (family == "pair_gaussian")
    return Density(PairGaussianDensity{p.at("mean_u").get<double>(),
                                       p.at("var_u").get<double>(),
                                       p.at("var_v").get<double>()});
  if (family == "restricted") {
    Density base = Density::from_json(p.at("base"));
    std::vector<Interval> ivs;
    for (const auto& e : p.at("domain"))
      ivs.push_back(Interval{e.at("lo").get<double>(), e.at("hi").get<double>(),
                             e.at("lo_closed").get<bool>(),
                             e.at("hi_closed").get<bool>()});
    return base.restrict(Event::real_union(std::move(ivs)));
  }
  throw ConfigError("unknown density family: " + family);
}

}  // namespace predictive
