#include "predictive/cid.hpp"

#include <cmath>

namespace predictive {

// --- ExpSmoothingStrategy ------------------------------------------------------

ExpSmoothingStrategy::ExpSmoothingStrategy(
    double q, Measure base, std::optional<std::vector<Rational>> base_exact)
    : q_(q), base_(std::move(base)) {
  if (!(q > 0.0 && q < 1.0)) throw ParamError("q must lie in (0, 1)");
  if (base_.space() == SpaceTag::Categorical) {
    q_exact_ = rational_from(q_);
    base_exact_ = base_exact ? *base_exact : exact_pmf_of(base_);
  }
}

Measure ExpSmoothingStrategy::predictive(
    std::span<const Observation> history) const {
  const int n = static_cast<int>(history.size());
  std::vector<std::pair<double, Measure>> parts;
  parts.reserve(n + 1);
  parts.emplace_back(std::pow(q_, n), base_);
  for (int i = 1; i <= n; ++i)
    parts.emplace_back((1.0 - q_) * std::pow(q_, n - i),
                       Measure::point_mass(history[i - 1], base_.alphabet_size()));
  return mix(parts);
}

std::vector<Rational> ExpSmoothingStrategy::predictive_exact(
    std::span<const int> history) const {
  const int K = base_.alphabet_size();
  const int n = static_cast<int>(history.size());
  std::vector<Rational> out(K);
  const Rational qn = pow_nonneg(q_exact_, n);
  for (int i = 0; i < K; ++i) out[i] = qn * base_exact_[i];
  const Rational one_minus_q = Rational(1) - q_exact_;
  for (int i = 1; i <= n; ++i)
    out[history[i - 1]] += one_minus_q * pow_nonneg(q_exact_, n - i);
  return out;
}

// --- QSchedule -------------------------------------------------------------------

QSchedule QSchedule::constant(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw ParamError("q_n must lie in [0, 1]");
  QSchedule s;
  s.kind = Kind::Constant;
  s.q = q;
  return s;
}

QSchedule QSchedule::dirichlet_like(double c) {
  if (!(c > 0.0)) throw ParamError("c must be positive");
  QSchedule s;
  s.kind = Kind::DirichletLike;
  s.c = c;
  return s;
}

QSchedule QSchedule::by_n(std::vector<double> values) {
  if (values.empty()) throw ParamError("q schedule needs values");
  for (double v : values)
    if (!(v >= 0.0 && v <= 1.0)) throw ParamError("q_n must lie in [0, 1]");
  QSchedule s;
  s.kind = Kind::ByN;
  s.values = std::move(values);
  return s;
}

QSchedule QSchedule::by_count(Event set, std::vector<double> values) {
  QSchedule s = by_n(std::move(values));
  s.kind = Kind::ByCount;
  s.count_set = std::move(set);
  return s;
}

double QSchedule::at(int n, std::span<const Observation> history) const {
  switch (kind) {
    case Kind::Constant: return q;
    case Kind::DirichletLike: return (n + c) / (n + 1.0 + c);
    case Kind::ByN:
      return values[std::min<size_t>(n, values.size() - 1)];
    case Kind::ByCount: {
      size_t count = 0;
      for (const auto& o : history)
        if (count_set->contains(o)) ++count;
      return values[std::min(count, values.size() - 1)];
    }
  }
  throw ParamError("unreachable schedule kind");
}

Rational QSchedule::at_exact(int n, std::span<const int> history) const {
  switch (kind) {
    case Kind::Constant: return rational_from(q);
    case Kind::DirichletLike: {
      const Rational cr = rational_from(c);
      return (Rational(n) + cr) / (Rational(n + 1) + cr);
    }
    case Kind::ByN:
      return rational_from(values[std::min<size_t>(n, values.size() - 1)]);
    case Kind::ByCount: {
      size_t count = 0;
      for (int x : history)
        if (count_set->mask()[x]) ++count;
      return rational_from(values[std::min(count, values.size() - 1)]);
    }
  }
  throw ParamError("unreachable schedule kind");
}

// --- RecursiveUpdateStrategy -------------------------------------------------------

namespace {

bool event_subset(const Event& a, const Event& b) {
  return a.intersect(b.complement()).empty();
}

// H_next must refine H_prev (every next cell inside one prev cell). Identity
// acts as the partition into singletons, constant as the trivial partition.
void check_refinement(const Kernel& prev, const Kernel& next) {
  using Rule = Kernel::Rule;
  if (prev.rule() == Rule::SetAugmented || next.rule() == Rule::SetAugmented)
    throw ParamError("recursive updates support constant/partition/identity kernels");
  if (prev.rule() == Rule::Constant) return;
  if (next.rule() == Rule::Constant)
    throw ParamError("kernel sequence must refine: constant after finer kernel");
  if (prev.rule() == Rule::Identity) {
    if (next.rule() != Rule::Identity)
      throw ParamError("kernel sequence must refine: partition after identity");
    return;
  }
  if (next.rule() == Rule::Identity) return;
  for (const auto& cell : next.cells()) {
    bool inside = false;
    for (const auto& coarse : prev.cells())
      if (event_subset(cell, coarse)) {
        inside = true;
        break;
      }
    if (!inside)
      throw ParamError("kernel sequence must refine: cell crosses a coarser cell");
  }
}

}  // namespace

RecursiveUpdateStrategy::RecursiveUpdateStrategy(
    Measure base, QSchedule q, std::vector<Kernel> kernels,
    std::optional<std::vector<Rational>> base_exact)
    : base_(std::move(base)), q_(std::move(q)), kernels_(std::move(kernels)) {
  if (kernels_.empty()) throw ParamError("recursive update needs kernels");
  for (const auto& k : kernels_) {
    if (k.space() != base_.space())
      throw SpaceMismatch("kernel space differs from the base");
    if (k.rule() != Kernel::Rule::Identity && !(k.base() == base_))
      throw KernelBaseError("kernel base differs from the strategy base");
  }
  for (size_t i = 0; i + 1 < kernels_.size(); ++i)
    check_refinement(kernels_[i], kernels_[i + 1]);
  if (base_.space() == SpaceTag::Categorical) {
    base_exact_ = base_exact ? *base_exact : exact_pmf_of(base_);
    for (const auto& k : kernels_) kernels_exact_.push_back(ExactCatKernel::from(k));
  }
}

Measure RecursiveUpdateStrategy::predictive(
    std::span<const Observation> history) const {
  Measure sigma = base_;
  for (size_t i = 0; i < history.size(); ++i) {
    const double qi = q_.at(static_cast<int>(i), history.subspan(0, i));
    const Measure alpha = kernel_at(i).apply(history[i]);
    if (qi == 1.0) continue;          // no learning at this step
    if (qi == 0.0) { sigma = alpha; continue; }
    sigma = mix({{qi, sigma}, {1.0 - qi, alpha}});
  }
  return sigma;
}

std::vector<Rational> RecursiveUpdateStrategy::predictive_exact(
    std::span<const int> history) const {
  const int K = base_.alphabet_size();
  std::vector<Rational> sigma = base_exact_;
  for (size_t i = 0; i < history.size(); ++i) {
    const Rational qi = q_.at_exact(static_cast<int>(i), history.subspan(0, i));
    const std::vector<Rational> alpha =
        kernels_exact_[std::min(i, kernels_exact_.size() - 1)].apply(
            base_exact_, history[i]);
    for (int j = 0; j < K; ++j)
      sigma[j] = qi * sigma[j] + (Rational(1) - qi) * alpha[j];
  }
  return sigma;
}

// --- StopRule ------------------------------------------------------------------------

StopRule StopRule::count_threshold(Event set, int k) {
  if (k < 1) throw ParamError("count threshold k must be >= 1");
  StopRule r;
  r.kind = Kind::CountThreshold;
  r.set = std::move(set);
  r.k = k;
  return r;
}

StopRule StopRule::single_horizon(int n0, Event set, std::vector<int> counts) {
  if (n0 < 1) throw ParamError("single-horizon stop needs n0 >= 1");
  StopRule r;
  r.kind = Kind::SingleHorizon;
  r.n0 = n0;
  r.set = std::move(set);
  r.counts = std::move(counts);
  return r;
}

StopRule StopRule::explicit_table(
    std::map<int, std::vector<std::vector<int>>> table) {
  StopRule r;
  r.kind = Kind::Table;
  r.table = std::move(table);
  // Stop events must be disjoint: no listed history may extend a shorter
  // listed history.
  for (const auto& [n, hists] : r.table) {
    for (const auto& h : hists) {
      if (static_cast<int>(h.size()) != n)
        throw ParamError("stop table entry length differs from its horizon");
      for (const auto& [m, shorter] : r.table) {
        if (m >= n) break;
        for (const auto& s : shorter)
          if (std::equal(s.begin(), s.end(), h.begin()))
            throw ParamError("stop events overlap: a history triggers twice");
      }
    }
  }
  return r;
}

StopRule StopRule::never() {
  StopRule r;
  r.kind = Kind::Table;
  return r;
}

bool StopRule::fires_at(std::span<const int> prefix) const {
  const int n = static_cast<int>(prefix.size());
  if (n < 1) return false;
  switch (kind) {
    case Kind::CountThreshold: {
      int count = 0;
      for (int x : prefix)
        if (set.mask()[x]) ++count;
      // first passage: the count reaches k exactly now
      return count == k && set.mask()[prefix.back()];
    }
    case Kind::SingleHorizon: {
      if (n != n0) return false;
      int count = 0;
      for (int x : prefix)
        if (set.mask()[x]) ++count;
      for (int c : counts)
        if (c == count) return true;
      return false;
    }
    case Kind::Table: {
      auto it = table.find(n);
      if (it == table.end()) return false;
      for (const auto& h : it->second)
        if (std::equal(h.begin(), h.end(), prefix.begin())) return true;
      return false;
    }
  }
  return false;
}

bool StopRule::fires_at(std::span<const Observation> prefix) const {
  if (kind == Kind::CountThreshold && !prefix.empty() &&
      prefix.front().space() != SpaceTag::Categorical) {
    int count = 0;
    for (const auto& o : prefix)
      if (set.contains(o)) ++count;
    return count == k && set.contains(prefix.back());
  }
  std::vector<int> h;
  h.reserve(prefix.size());
  for (const auto& o : prefix) h.push_back(o.cat_index());
  return fires_at(std::span<const int>(h));
}

bool StopRule::triggered_by(std::span<const int> history) const {
  for (size_t j = 1; j <= history.size(); ++j)
    if (fires_at(history.subspan(0, j))) return true;
  return false;
}

bool StopRule::triggered_by(std::span<const Observation> history) const {
  for (size_t j = 1; j <= history.size(); ++j)
    if (fires_at(history.subspan(0, j))) return true;
  return false;
}

// --- ChangePointStrategy ----------------------------------------------------------

ChangePointStrategy::ChangePointStrategy(StrategyPtr beta, StopRule stop,
                                         QSchedule q, PostMode post,
                                         std::vector<Event> conditional_cells)
    : beta_(std::move(beta)),
      stop_(std::move(stop)),
      q_(std::move(q)),
      post_(post),
      cells_(std::move(conditional_cells)) {
  if (!beta_) throw ParamError("change point needs a pre-change strategy");
  if (post_ == PostMode::Conditional && cells_.empty())
    throw ParamError("conditional post mode needs a partition");
}

int ChangePointStrategy::cell_index(const Observation& y) const {
  for (size_t i = 0; i < cells_.size(); ++i)
    if (cells_[i].contains(y)) return static_cast<int>(i);
  throw PartitionCoverageError("observation lies in no partition cell");
}

Measure ChangePointStrategy::predictive(
    std::span<const Observation> history) const {
  const size_t n = history.size();
  if (n <= 1) return beta_->predictive(history);
  // sigma_0 = beta_0, sigma_1 = beta_1; from sigma_2 on, the recursion
  // switches as soon as T <= m, where T is evaluated on the proper prefix.
  Measure sigma = beta_->predictive(history.subspan(0, 1));
  for (size_t m = 2; m <= n; ++m) {
    const auto prefix = history.subspan(0, m - 1);
    const Observation& y = history[m - 1];
    if (!stop_.triggered_by(prefix)) {
      sigma = beta_->predictive(history.subspan(0, m));
      continue;
    }
    const double qn = q_.at(static_cast<int>(m - 1), prefix);
    const Measure post =
        post_ == PostMode::Delta
            ? Measure::point_mass(y, beta_->alphabet_size())
            : sigma.condition(cells_[cell_index(y)]);
    if (qn == 1.0) continue;
    sigma = qn == 0.0 ? post : mix({{qn, sigma}, {1.0 - qn, post}});
  }
  return sigma;
}

const CategoricalExact* ChangePointStrategy::exact() const {
  if (space() != SpaceTag::Categorical || beta_->exact() == nullptr)
    return nullptr;
  return this;
}

std::vector<Rational> ChangePointStrategy::predictive_exact(
    std::span<const int> history) const {
  const CategoricalExact* beta = beta_->exact();
  if (!beta) throw ParamError("pre-change strategy has no exact form");
  const size_t n = history.size();
  const int K = beta->exact_alphabet_size();
  if (n <= 1) return beta->predictive_exact(history);
  std::vector<Rational> sigma = beta->predictive_exact(history.subspan(0, 1));
  for (size_t m = 2; m <= n; ++m) {
    const auto prefix = history.subspan(0, m - 1);
    const int y = history[m - 1];
    if (!stop_.triggered_by(prefix)) {
      sigma = beta->predictive_exact(history.subspan(0, m));
      continue;
    }
    const Rational qn = q_.at_exact(static_cast<int>(m - 1), prefix);
    std::vector<Rational> post(K, Rational(0));
    if (post_ == PostMode::Delta) {
      post[y] = 1;
    } else {
      const auto& mask = cells_[cell_index(Observation::cat(y))].mask();
      Rational total(0);
      for (int i = 0; i < K; ++i)
        if (mask[i]) total += sigma[i];
      if (total == 0)
        throw ConditioningError("conditional change point hit a null cell");
      for (int i = 0; i < K; ++i)
        if (mask[i]) post[i] = sigma[i] / total;
    }
    for (int i = 0; i < K; ++i)
      sigma[i] = qn * sigma[i] + (Rational(1) - qn) * post[i];
  }
  return sigma;
}

// --- CovariateStrategy ----------------------------------------------------------

CovariateStrategy::CovariateStrategy(std::vector<double> b) : b_(std::move(b)) {
  if (b_.empty()) throw ParamError("covariate strategy needs b values");
  double prev = 0.0;
  for (double v : b_) {
    if (!(v > prev)) throw ParamError("b sequence must be strictly increasing from 0");
    if (!(v < 1.0))
      throw ParamError("b values must stay below 1 to keep variances positive");
    prev = v;
  }
}

Measure CovariateStrategy::predictive(
    std::span<const Observation> history) const {
  const size_t n = history.size();
  if (n >= b_.size())
    throw HorizonError("b sequence exhausted: b_{n+1} is undefined");
  double mean_u = 0.0;
  if (n > 0) {
    const RealPair& last = history[n - 1].pair_value();
    mean_u = last.x - last.z;
  }
  const double b_prev = n == 0 ? 0.0 : b_[n - 1];
  const double var_u = b_[n] - b_prev;
  const double var_v = 1.0 - b_[n];
  return Measure::from_parts(
      SpaceTag::RealPair, 0, {},
      {{1.0, Density(PairGaussianDensity{mean_u, var_u, var_v})}});
}

double covariate_marginal_x_variance(const std::vector<double>& b, int n) {
  if (n < 1) throw ParamError("marginal variance needs n >= 1");
  if (n > static_cast<int>(b.size()))
    throw HorizonError("b sequence exhausted");
  double acc = 0.0, prev = 0.0;
  for (int j = 0; j < n; ++j) {
    acc += b[j] - prev;  // Var of the telescoping increments of X - Z
    prev = b[j];
  }
  return acc + (1.0 - b[n - 1]);  // plus Var(Z_n)
}

// --- AdversarialStrategy ----------------------------------------------------------

AdversarialStrategy::AdversarialStrategy(int alphabet) : alphabet_(alphabet) {
  if (alphabet_ < 2) throw ParamError("adversarial fixture needs |S| >= 2");
}

Measure AdversarialStrategy::predictive(
    std::span<const Observation> history) const {
  if (history.size() == 1) return Measure::point_mass(history[0], alphabet_);
  return Measure::uniform_categorical(alphabet_);
}

std::vector<Rational> AdversarialStrategy::predictive_exact(
    std::span<const int> history) const {
  std::vector<Rational> out(alphabet_, Rational(1, alphabet_));
  if (history.size() == 1) {
    std::fill(out.begin(), out.end(), Rational(0));
    out[history[0]] = 1;
  }
  return out;
}

}  // namespace predictive
