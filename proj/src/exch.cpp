#include "predictive/exch.hpp"

#include <cmath>
#include <unordered_map>

namespace predictive {

std::vector<Rational> exact_pmf_of(const Measure& m) {
  if (m.space() != SpaceTag::Categorical)
    throw SpaceMismatch("exact pmf requires a categorical measure");
  std::vector<double> p = m.pmf();
  std::vector<Rational> out;
  out.reserve(p.size());
  for (double v : p) out.emplace_back(rational_from(v));
  return out;
}

// --- DirichletStrategy -------------------------------------------------------

DirichletStrategy::DirichletStrategy(
    double c, Measure base, Kernel kernel,
    std::optional<std::vector<Rational>> base_exact,
    std::optional<Rational> c_exact)
    : c_(c), base_(std::move(base)), kernel_(std::move(kernel)) {
  if (!(c_ > 0.0)) throw ParamError("concentration c must be positive");
  if (kernel_.rule() != Kernel::Rule::Identity && !(kernel_.base() == base_))
    throw KernelBaseError("kernel base differs from the strategy base");
  if (base_.space() == SpaceTag::Categorical) {
    c_exact_ = c_exact ? *c_exact : rational_from(c_);
    base_exact_ = base_exact ? *base_exact : exact_pmf_of(base_);
    kernel_exact_ = ExactCatKernel::from(kernel_);
  }
}

DirichletStrategy DirichletStrategy::classical(double c, Measure base) {
  Kernel k = Kernel::identity(base);
  return DirichletStrategy(c, std::move(base), std::move(k));
}

Measure DirichletStrategy::predictive(
    std::span<const Observation> history) const {
  const double n = static_cast<double>(history.size());
  std::vector<std::pair<double, Measure>> parts;
  parts.reserve(history.size() + 1);
  parts.emplace_back(c_ / (n + c_), base_);
  for (const auto& x : history)
    parts.emplace_back(1.0 / (n + c_), kernel_.apply(x));
  return mix(parts);
}

std::vector<Rational> DirichletStrategy::predictive_exact(
    std::span<const int> history) const {
  const int K = base_.alphabet_size();
  const Rational n = rational_from(static_cast<double>(history.size()));
  std::vector<Rational> acc(K);
  for (int i = 0; i < K; ++i) acc[i] = c_exact_ * base_exact_[i];
  for (int x : history) {
    const std::vector<Rational> a = kernel_exact_->apply(base_exact_, x);
    for (int i = 0; i < K; ++i) acc[i] += a[i];
  }
  const Rational denom = n + c_exact_;
  for (auto& v : acc) v /= denom;
  return acc;
}

// --- urn ----------------------------------------------------------------------

UrnParams::UrnParams(std::vector<Rational> counts,
                     std::vector<std::vector<int>> cells)
    : initial_counts(std::move(counts)), partition(std::move(cells)) {
  const int k = colors();
  if (k == 0) throw ParamError("urn needs at least one color");
  std::vector<char> seen(k, 0);
  for (const auto& cell : partition) {
    Rational cell_total = 0;
    for (int j : cell) {
      if (j < 0 || j >= k) throw ParamError("urn cell color out of range");
      if (seen[j]) throw ParamError("urn partition cells overlap");
      seen[j] = 1;
      if (initial_counts[j] < 0) throw ParamError("urn counts must be >= 0");
      cell_total += initial_counts[j];
    }
    if (!(cell_total > 0))
      throw ParamError("every urn cell needs positive total count");
  }
  for (char s : seen)
    if (!s) throw ParamError("urn partition does not cover the colors");
}

int UrnParams::cell_of(int color) const {
  for (size_t i = 0; i < partition.size(); ++i)
    for (int j : partition[i])
      if (j == color) return static_cast<int>(i);
  throw PartitionCoverageError("color lies in no urn cell");
}

std::vector<Rational> UrnParams::reinforcement(int drawn_color) const {
  // m_j* = m nu({j}|H_j) = m m_j / sum_{i in H_j} m_i for every j in the
  // drawn color's cell; zero elsewhere.
  Rational m = 0;
  for (const auto& v : initial_counts) m += v;
  const auto& cell = partition[cell_of(drawn_color)];
  Rational cell_total = 0;
  for (int j : cell) cell_total += initial_counts[j];
  std::vector<Rational> add(colors(), Rational(0));
  for (int j : cell) add[j] = m * initial_counts[j] / cell_total;
  return add;
}

Rational UrnState::total() const {
  Rational t = 0;
  for (const auto& v : counts) t += v;
  return t;
}

Measure urn_predictive(const UrnState& state) {
  const Rational total = state.total();
  if (!(total > 0)) throw ParamError("urn is empty");
  std::vector<double> pmf;
  pmf.reserve(state.counts.size());
  for (const auto& v : state.counts) pmf.push_back(to_double(v / total));
  return Measure::categorical(std::move(pmf));
}

UrnState urn_update(const UrnState& state, int drawn_color,
                    const UrnParams& params) {
  UrnState next = state;
  const std::vector<Rational> add = params.reinforcement(drawn_color);
  for (size_t j = 0; j < next.counts.size(); ++j) next.counts[j] += add[j];
  return next;
}

UrnStrategy::UrnStrategy(UrnParams params) : params_(std::move(params)) {}

std::vector<Rational> UrnStrategy::predictive_exact(
    std::span<const int> history) const {
  UrnState state{params_.initial_counts};
  for (int color : history) state = urn_update(state, color, params_);
  const Rational total = state.total();
  std::vector<Rational> pmf;
  pmf.reserve(state.counts.size());
  for (const auto& v : state.counts) pmf.push_back(v / total);
  return pmf;
}

Measure UrnStrategy::predictive(std::span<const Observation> history) const {
  std::vector<int> h;
  h.reserve(history.size());
  for (const auto& o : history) h.push_back(o.cat_index());
  const std::vector<Rational> pmf = predictive_exact(h);
  std::vector<double> p;
  p.reserve(pmf.size());
  for (const auto& v : pmf) p.push_back(to_double(v));
  return Measure::categorical(std::move(p));
}

// --- species sampling ---------------------------------------------------------

SpeciesWeights::SpeciesWeights(Rule rule_, double b_, double c_)
    : rule(rule_), b(b_), c(c_) {
  if (rule == Rule::PoissonDirichlet) {
    if (b >= 0.0) {
      if (!(b < 1.0 && c > -b))
        throw ParamError("PD weights need 0 <= b < 1 and c > -b");
    } else {
      const double ratio = c / (-b);
      const long long m = std::llround(ratio);
      if (m < 2 || std::fabs(c + static_cast<double>(m) * b) > 1e-12)
        throw ParamError("PD with b < 0 needs c = -m b for an integer m >= 2");
      cap_ = static_cast<int>(m);
    }
  } else {
    if (!(b > 0.0)) throw ParamError("Gnedin weights need b > 0");
    // k^2 + b k + c is increasing in k for k >= 1 when b > 0, so k = 1 is
    // the binding case.
    if (!(1.0 + b + c > 0.0))
      throw ParamError("Gnedin weights need k^2 + b k + c > 0 for all k >= 1");
  }
}

std::pair<std::vector<double>, double> species_weights(
    const SpeciesWeights& w, int n, std::span<const int> counts) {
  const int k = static_cast<int>(counts.size());
  int total = 0;
  for (int c : counts) {
    if (c <= 0) throw ParamError("species counts must be positive");
    total += c;
  }
  if (total != n) throw ParamError("species counts must sum to n");

  std::vector<double> p(k, 0.0);
  double q = 0.0;
  if (w.rule == SpeciesWeights::Rule::PoissonDirichlet) {
    for (int j = 0; j < k; ++j) p[j] = (counts[j] - w.b) / (n + w.c);
    q = (w.b * k + w.c) / (n + w.c);
    if (w.species_cap() && k >= *w.species_cap()) q = 0.0;  // exact at k = m
  } else {
    const double denom = static_cast<double>(n) * n + w.b * n + w.c;
    for (int j = 0; j < k; ++j)
      p[j] = (counts[j] + 1.0) * (n - k + w.b) / denom;
    q = (static_cast<double>(k) * k - w.b * k + w.c) / denom;
  }
  for (double v : p)
    if (v < 0.0) throw ParamError("species weights turned negative");
  if (q < 0.0) throw ParamError("species weights turned negative");
  return {std::move(p), q};
}

SpeciesStrategy::SpeciesStrategy(SpeciesWeights weights, Measure base)
    : weights_(weights), base_(std::move(base)) {
  if (base_.space() != SpaceTag::Real)
    throw NonAtomicityError("species base must be a real nonatomic measure");
  if (base_.has_atoms())
    throw NonAtomicityError("species base must be nonatomic");
}

Measure SpeciesStrategy::predictive(
    std::span<const Observation> history) const {
  if (history.empty()) return base_;
  // distinct values in order of appearance, exact equality
  std::vector<double> distinct;
  std::vector<int> counts;
  std::unordered_map<double, int> index;
  index.reserve(history.size());
  for (const auto& o : history) {
    const double x = o.real_value();
    auto [it, inserted] = index.try_emplace(x, static_cast<int>(distinct.size()));
    if (inserted) {
      distinct.push_back(x);
      counts.push_back(1);
    } else {
      ++counts[it->second];
    }
  }
  const auto [p, q] =
      species_weights(weights_, static_cast<int>(history.size()), counts);
  std::vector<Atom> atoms;
  atoms.reserve(distinct.size());
  for (size_t j = 0; j < distinct.size(); ++j)
    atoms.push_back({Observation::real(distinct[j]), p[j]});
  std::vector<std::pair<double, Density>> ds;
  if (q > 0.0)
    for (const auto& [w, d] : base_.densities()) ds.emplace_back(q * w, d);
  return Measure::from_parts(SpaceTag::Real, 0, std::move(atoms), std::move(ds));
}

double pd_all_distinct_probability(const SpeciesWeights& w, int n) {
  if (w.rule != SpeciesWeights::Rule::PoissonDirichlet)
    throw ParamError("closed-form no-ties product is a PD identity");
  double prod = 1.0;
  for (int i = 1; i < n; ++i) prod *= (w.c + w.b * i) / (w.c + i);
  return prod;
}

// --- stick breaking -----------------------------------------------------------

StickBreakingDraw stick_breaking_sample(const StickBreakingParams& p, Rng& rng) {
  if (p.truncation < 1) throw ParamError("truncation J must be >= 1");
  if (!(p.c > 0.0)) throw ParamError("stick-breaking c must be positive");
  std::vector<std::pair<double, Measure>> parts;
  parts.reserve(p.truncation);
  double remaining = 1.0;  // prod_{i<j} (1 - U_i)
  double v_sum = 0.0;
  std::vector<double> v(p.truncation);
  std::vector<Observation> z(p.truncation);
  for (int j = 0; j < p.truncation; ++j) {
    z[j] = p.base.sample(rng);
    const double u = rng.beta_1c(p.c);
    v[j] = u * remaining;
    remaining *= (1.0 - u);
    v_sum += v[j];
  }
  for (int j = 0; j < p.truncation; ++j)
    parts.emplace_back(v[j] / v_sum, p.kernel.apply(z[j]));
  return {mix(parts), remaining};
}

}  // namespace predictive
