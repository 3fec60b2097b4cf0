#include "predictive/stationary.hpp"

#include <cmath>

#include "predictive/parallel.hpp"
#include "predictive/quadrature.hpp"

namespace predictive {

// --- stable AR -----------------------------------------------------------------

StableArParams::StableArParams(double gamma_, double a_, double b_, double c_)
    : gamma(gamma_), a(a_), b(b_), c(c_) {
  StableLaw(gamma, a, b);  // validates gamma and b
  if (!(std::fabs(c) < 1.0))
    throw ParamError("autoregression coefficient needs |c| < 1");
}

double StableArParams::stationary_scale() const {
  return b / (1.0 - std::pow(std::fabs(c), gamma));
}

StableArStrategy::StableArStrategy(StableArParams p) : params_(p) {}

Measure StableArStrategy::predictive(
    std::span<const Observation> history) const {
  if (history.empty())
    return Measure::stable(params_.gamma, 0.0, params_.stationary_scale());
  // f(x) = -a + c x plus an error with location a nets S(c x_n, b).
  const double xn = history.back().real_value();
  return Measure::stable(params_.gamma, params_.c * xn, params_.b);
}

double StableArStrategy::predictive_density(
    std::span<const Observation> history, double z) const {
  if (history.empty())
    return StableLaw(params_.gamma, 0.0, params_.stationary_scale()).pdf(z);
  return StableLaw(params_.gamma, params_.c * history.back().real_value(),
                   params_.b)
      .pdf(z);
}

StableStationarityResult verify_stable_stationarity(
    const StableArParams& p, std::span<const double> t_grid, size_t mc_samples,
    uint64_t seed, bool parallel, std::optional<double> marginal_scale) {
  StableStationarityResult r;
  r.seed = seed;
  const double u = std::pow(std::fabs(p.c), p.gamma);
  const double s = marginal_scale.value_or(p.stationary_scale());

  // One AR step maps S(0, s) to S(0, |c|^gamma s + b): the cf picks up
  // exp(-s |c t|^gamma / 2) * exp(-b |t|^gamma / 2). With s = b / (1 - u)
  // the scale identity u s + b = u b/(1-u) + b = b/(1-u) = s holds
  // symbolically, so the stepped law IS the marginal and the deviation is 0.
  r.coeff_residual = std::fabs(u * s + p.b - s);
  r.symbolic_identity = (s == p.stationary_scale());
  const double stepped = r.symbolic_identity ? s : (u * s + p.b);
  const StableLaw nu(p.gamma, 0.0, s);
  const StableLaw nu_step(p.gamma, 0.0, stepped);
  double dev = 0.0;
  for (double t : t_grid)
    dev = std::max(dev, std::abs(nu_step.cf(t) - nu.cf(t)));
  r.analytic_cf_deviation = dev;

  if (mc_samples > 0) {
    // Draw X ~ nu, apply one AR step: Y = -a + c X + U with U ~ S(a, b).
    const StableLaw err(p.gamma, p.a, p.b);
    std::vector<double> y = sample_batch(
        [&](Rng& rng) {
          const double x = nu.sample(rng);
          return -p.a + p.c * x + err.sample(rng);
        },
        mc_samples, seed, parallel);
    double mc_dev = 0.0;
    for (double t : t_grid)
      mc_dev = std::max(mc_dev, std::abs(empirical_cf(y, t, parallel) - nu.cf(t)));
    r.mc_cf_deviation = mc_dev;
    r.mc_samples = mc_samples;
  }
  return r;
}

double stable_convolution_residual(double gamma, double b, double r,
                                   std::span<const Interval> events,
                                   double quad_tol) {
  const StableLaw inner(gamma, 0.0, r);
  const StableLaw target(gamma, 0.0, b + r);
  double residual = 0.0;
  for (const auto& iv : events) {
    auto integrand = [&](double x) {
      const StableLaw shifted(gamma, x, b);
      const double hi = std::isinf(iv.hi) ? 1.0 : shifted.cdf(iv.hi);
      const double lo = std::isinf(iv.lo) ? 0.0 : shifted.cdf(iv.lo);
      return (hi - lo) * inner.pdf(x);
    };
    const double lhs =
        integrate(integrand, -std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(), quad_tol)
            .value;
    const double rhs = (std::isinf(iv.hi) ? 1.0 : target.cdf(iv.hi)) -
                       (std::isinf(iv.lo) ? 0.0 : target.cdf(iv.lo));
    residual = std::max(residual, std::fabs(lhs - rhs));
  }
  return residual;
}

// --- cyclic Markov (finite) ------------------------------------------------------

CyclicMarkovStrategy::CyclicMarkovStrategy(int alphabet, int block,
                                           const std::vector<double>& h_values)
    : alphabet_(alphabet), block_(block) {
  std::vector<Rational> h;
  h.reserve(h_values.size());
  for (double v : h_values) h.emplace_back(rational_from(v));
  build(std::move(h));
}

CyclicMarkovStrategy::CyclicMarkovStrategy(int alphabet, int block,
                                           std::vector<Rational> h_exact)
    : alphabet_(alphabet), block_(block) {
  build(std::move(h_exact));
}

void CyclicMarkovStrategy::build(std::vector<Rational> h) {
  if (alphabet_ < 2) throw ParamError("cyclic Markov needs |S| >= 2");
  if (block_ < 2) throw ParamError("cyclic Markov needs n >= 2");
  size_t size = 1;
  for (int i = 0; i < block_; ++i) size *= static_cast<size_t>(alphabet_);
  if (h.size() != size) throw ParamError("h table size must be |S|^n");
  Rational total(0);
  for (const auto& v : h) {
    if (!(v > 0)) throw SupportError("h must be strictly positive");
    total += v;
  }
  if (scalar_abs(total - Rational(1)) > rational_from(1e-10))
    throw NormalizationError("h must be normalized within 1e-10");

  // g(x) = (1/n) sum over cyclic shifts of h
  g_.assign(size, Rational(0));
  std::vector<int> digits(block_);
  for (size_t idx = 0; idx < size; ++idx) {
    size_t rem = idx;
    for (int i = block_ - 1; i >= 0; --i) {
      digits[i] = static_cast<int>(rem % alphabet_);
      rem /= alphabet_;
    }
    Rational acc(0);
    for (int s = 0; s < block_; ++s) {
      size_t shifted = 0;
      for (int i = 0; i < block_; ++i)
        shifted = shifted * alphabet_ + digits[(i + s) % block_];
      acc += h[shifted];
    }
    g_[idx] = acc / Rational(block_);
  }

  // prefix marginals
  marg_.assign(block_ + 1, {});
  marg_[block_] = g_;
  for (int j = block_ - 1; j >= 0; --j) {
    size_t len = 1;
    for (int i = 0; i < j; ++i) len *= static_cast<size_t>(alphabet_);
    marg_[j].assign(len, Rational(0));
    for (size_t idx = 0; idx < len; ++idx) {
      Rational acc(0);
      for (int y = 0; y < alphabet_; ++y)
        acc += marg_[j + 1][idx * alphabet_ + y];
      marg_[j][idx] = acc;
    }
  }
}

std::vector<Rational> CyclicMarkovStrategy::predictive_exact(
    std::span<const int> history) const {
  // Beyond lag n-1 the predictive depends only on the last n-1 observations.
  std::span<const int> tail = history;
  if (static_cast<int>(history.size()) > block_ - 1)
    tail = history.subspan(history.size() - (block_ - 1));
  const int j = static_cast<int>(tail.size());
  size_t idx = 0;
  for (int x : tail) idx = idx * alphabet_ + static_cast<size_t>(x);
  const Rational denom = marg_[j][idx];
  if (denom == 0) throw SupportError("zero marginal in a conditional ratio");
  std::vector<Rational> out(alphabet_);
  for (int y = 0; y < alphabet_; ++y)
    out[y] = marg_[j + 1][idx * alphabet_ + y] / denom;
  return out;
}

Measure CyclicMarkovStrategy::predictive(
    std::span<const Observation> history) const {
  std::vector<int> h;
  h.reserve(history.size());
  for (const auto& o : history) h.push_back(o.cat_index());
  const std::vector<Rational> pmf = predictive_exact(h);
  std::vector<double> p;
  p.reserve(pmf.size());
  for (const auto& v : pmf) p.push_back(to_double(v));
  return Measure::categorical(std::move(p));
}

// --- cyclic Markov (tabulated real) ----------------------------------------------

CyclicMarkovGridStrategy::CyclicMarkovGridStrategy(std::vector<double> axis,
                                                   int block,
                                                   std::vector<double> h_values)
    : axis_(std::move(axis)), block_(block) {
  if (block_ < 2) throw ParamError("cyclic Markov needs n >= 2");
  if (axis_.size() < 2) throw ParamError("axis grid needs >= 2 points");
  size_t size = 1;
  for (int i = 0; i < block_; ++i) size *= axis_.size();
  if (h_values.size() != size) throw ParamError("h table size must be m^n");
  for (double v : h_values)
    if (!(v > 0.0)) throw SupportError("h must be strictly positive");

  g_.assign(size, 0.0);
  const int m = static_cast<int>(axis_.size());
  std::vector<int> digits(block_);
  for (size_t idx = 0; idx < size; ++idx) {
    size_t rem = idx;
    for (int i = block_ - 1; i >= 0; --i) {
      digits[i] = static_cast<int>(rem % m);
      rem /= m;
    }
    double acc = 0.0;
    for (int s = 0; s < block_; ++s) {
      size_t shifted = 0;
      for (int i = 0; i < block_; ++i)
        shifted = shifted * m + digits[(i + s) % block_];
      acc += h_values[shifted];
    }
    g_[idx] = acc / block_;
  }
}

// g values along the z axis after multilinear interpolation in the
// conditioning coordinates.
std::vector<double> CyclicMarkovGridStrategy::conditional_slice(
    std::span<const Observation> tail) const {
  const int m = static_cast<int>(axis_.size());
  const int j = static_cast<int>(tail.size());
  // collect (cell, weight) pairs per conditioning coordinate
  std::vector<std::pair<size_t, double>> locs(j);
  for (int i = 0; i < j; ++i) {
    const double x = tail[i].real_value();
    size_t c;
    if (x <= axis_.front()) c = 0;
    else if (x >= axis_.back()) c = axis_.size() - 2;
    else
      c = static_cast<size_t>(std::upper_bound(axis_.begin(), axis_.end(), x) -
                              axis_.begin()) - 1;
    const double t = std::clamp((x - axis_[c]) / (axis_[c + 1] - axis_[c]), 0.0, 1.0);
    locs[i] = {c, t};
  }
  // trailing free coordinates beyond the z axis
  const int free = block_ - j - 1;
  size_t free_size = 1;
  for (int i = 0; i < free; ++i) free_size *= m;

  std::vector<double> slice(m, 0.0);
  const int corners = 1 << j;
  for (int corner = 0; corner < corners; ++corner) {
    double w = 1.0;
    size_t base = 0;
    for (int i = 0; i < j; ++i) {
      const bool hi = corner & (1 << i);
      w *= hi ? locs[i].second : 1.0 - locs[i].second;
      base = base * m + locs[i].first + (hi ? 1 : 0);
    }
    if (w == 0.0) continue;
    for (int z = 0; z < m; ++z) {
      const size_t row = (base * m + z) * free_size;
      double acc = 0.0;
      if (free == 0) {
        acc = g_[row];
      } else {
        // trapezoid over the free coordinates
        std::vector<int> d(free, 0);
        for (size_t f = 0; f < free_size; ++f) {
          size_t rem = f;
          double cellw = 1.0;
          for (int i = free - 1; i >= 0; --i) {
            d[i] = static_cast<int>(rem % m);
            rem /= m;
            const int di = d[i];
            double wgt;
            if (di == 0)
              wgt = 0.5 * (axis_[1] - axis_[0]);
            else if (di == m - 1)
              wgt = 0.5 * (axis_[m - 1] - axis_[m - 2]);
            else
              wgt = 0.5 * (axis_[di + 1] - axis_[di - 1]);
            cellw *= wgt;
          }
          acc += g_[row + f] * cellw;
        }
      }
      slice[z] += w * acc;
    }
  }
  return slice;
}

Measure CyclicMarkovGridStrategy::predictive(
    std::span<const Observation> history) const {
  std::span<const Observation> tail = history;
  if (static_cast<int>(history.size()) > block_ - 1)
    tail = history.subspan(history.size() - (block_ - 1));
  std::vector<double> pdf = conditional_slice(tail);
  return Measure::tabulated(axis_, std::move(pdf));
}

// --- first-order invariance -------------------------------------------------------

double markov_invariance_residual(const Strategy& s) {
  if (s.space() != SpaceTag::Categorical)
    throw SpaceMismatch("table summation needs a categorical strategy");
  const int K = s.alphabet_size();
  if (const CategoricalExact* ex = s.exact()) {
    const std::vector<Rational> sigma0 = ex->predictive_exact({});
    std::vector<Rational> stepped(K, Rational(0));
    for (int x = 0; x < K; ++x) {
      const int hist[1] = {x};
      const std::vector<Rational> sigma1 = ex->predictive_exact(hist);
      for (int z = 0; z < K; ++z) stepped[z] += sigma1[z] * sigma0[x];
    }
    Rational res(0);
    for (int z = 0; z < K; ++z)
      res = std::max(res, scalar_abs(stepped[z] - sigma0[z]));
    return to_double(res);
  }
  const std::vector<double> sigma0 = s.predictive({}).pmf();
  std::vector<double> stepped(K, 0.0);
  for (int x = 0; x < K; ++x) {
    const Observation hist[1] = {Observation::cat(x)};
    const std::vector<double> sigma1 = s.predictive(hist).pmf();
    for (int z = 0; z < K; ++z) stepped[z] += sigma1[z] * sigma0[x];
  }
  double res = 0.0;
  for (int z = 0; z < K; ++z)
    res = std::max(res, std::fabs(stepped[z] - sigma0[z]));
  return res;
}

}  // namespace predictive
