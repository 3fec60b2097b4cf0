#include "predictive/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "predictive/cid.hpp"
#include "predictive/hmw.hpp"
#include "predictive/parallel.hpp"
#include "predictive/quadrature.hpp"

namespace predictive {

using nlohmann::json;

const char* check_kind_name(CheckKind k) {
  switch (k) {
    case CheckKind::Exchangeability: return "exchangeability";
    case CheckKind::Cid: return "cid";
    case CheckKind::Stationarity: return "stationarity";
    case CheckKind::CidQuadrature: return "cid_quadrature";
    case CheckKind::McTwoSample: return "mc_two_sample";
    case CheckKind::CfDistance: return "cf_distance";
  }
  return "?";
}

const char* check_method_name(CheckMethod m) {
  switch (m) {
    case CheckMethod::Exact: return "exact";
    case CheckMethod::Quadrature: return "quadrature";
    case CheckMethod::MonteCarlo: return "monte_carlo";
  }
  return "?";
}

json VerificationReport::to_json() const {
  json j{{"check", check_kind_name(kind)},   {"family", family},
         {"horizon", horizon},               {"residual", residual},
         {"tolerance", tolerance},           {"verdict", pass ? "pass" : "fail"},
         {"method", check_method_name(method)}, {"witness", witness}};
  if (sample_size) j["sample_size"] = *sample_size;
  if (seed) j["seed"] = *seed;
  return j;
}

std::string VerificationReport::csv_header() {
  return "check,family,horizon,residual,tolerance,verdict,method,sample_size,seed";
}

std::string VerificationReport::csv_row() const {
  std::ostringstream os;
  os.precision(17);
  os << check_kind_name(kind) << "," << family << "," << horizon << ","
     << residual << "," << tolerance << "," << (pass ? "pass" : "fail") << ","
     << check_method_name(method) << ",";
  if (sample_size) os << *sample_size;
  os << ",";
  if (seed) os << *seed;
  return os.str();
}

namespace {

// One templated body for both scalar types; T is double or Rational.
template <class T>
struct ExchScan {
  T residual = scalar_from_double<T>(0.0);
  int n = 0;
  std::vector<int> path_lo, path_hi;
  double value_lo = 0.0, value_hi = 0.0;
};

// Permutation-orbit statistics collected in order of first appearance, so
// witness selection is deterministic (the earliest orbit attaining the
// maximum wins ties).
template <class T>
struct OrbitEntry {
  T lo, hi;
  size_t lo_idx, hi_idx;
};

template <class T, class WeightFn>
std::vector<OrbitEntry<T>> orbit_stats(const PathTable<T>& table,
                                       const WeightFn& weight) {
  std::map<std::vector<int>, size_t> index;
  std::vector<OrbitEntry<T>> orbits;
  std::vector<int> digits;
  std::vector<int> hist(table.alphabet);
  for (size_t idx = 0; idx < table.p.size(); ++idx) {
    table.decode(idx, digits);
    std::fill(hist.begin(), hist.end(), 0);
    for (int d : digits) ++hist[d];
    const T w = weight(idx);
    auto [it, inserted] = index.try_emplace(hist, orbits.size());
    if (inserted) {
      orbits.push_back(OrbitEntry<T>{w, w, idx, idx});
    } else {
      OrbitEntry<T>& e = orbits[it->second];
      if (w < e.lo) {
        e.lo = w;
        e.lo_idx = idx;
      }
      if (w > e.hi) {
        e.hi = w;
        e.hi_idx = idx;
      }
    }
  }
  return orbits;
}

template <class T>
ExchScan<T> scan_exchangeability(const PmfFn<T>& pmf, int alphabet, int horizon,
                                 size_t budget) {
  ExchScan<T> best;
  for (int n = 2; n <= horizon; ++n) {
    const PathTable<T> table = enumerate_paths_serial<T>(alphabet, n, pmf, budget);
    const auto orbits =
        orbit_stats<T>(table, [&](size_t idx) { return table.p[idx]; });
    for (const auto& e : orbits) {
      const T spread = e.hi - e.lo;
      if (spread > best.residual) {
        best.residual = spread;
        best.n = n;
        table.decode(e.lo_idx, best.path_lo);
        table.decode(e.hi_idx, best.path_hi);
        best.value_lo = to_double(e.lo);
        best.value_hi = to_double(e.hi);
      }
    }
  }
  return best;
}

template <class T>
PmfFn<T> exact_or_double_pmf(const Strategy& s);

template <>
PmfFn<Rational> exact_or_double_pmf<Rational>(const Strategy& s) {
  const CategoricalExact* ex = s.exact();
  return [ex](std::span<const int> h) { return ex->predictive_exact(h); };
}

template <>
PmfFn<double> exact_or_double_pmf<double>(const Strategy& s) {
  return [&s](std::span<const int> h) {
    return s.predictive(to_observations(h)).pmf();
  };
}

}  // namespace

VerificationReport check_exchangeability_exact(const Strategy& s, int horizon,
                                               double tolerance, size_t budget) {
  if (s.space() != SpaceTag::Categorical)
    throw SpaceMismatch("exact exchangeability check needs a categorical space");
  VerificationReport r;
  r.kind = CheckKind::Exchangeability;
  r.family = s.family();
  r.horizon = horizon;
  r.tolerance = tolerance;
  r.method = CheckMethod::Exact;
  const int K = s.alphabet_size();

  json witness;
  if (s.exact()) {
    const auto scan = scan_exchangeability<Rational>(
        exact_or_double_pmf<Rational>(s), K, horizon, budget);
    r.residual = to_double(scan.residual);
    witness = {{"n", scan.n},
               {"path_a", scan.path_hi},
               {"path_b", scan.path_lo},
               {"g_a", scan.value_hi},
               {"g_b", scan.value_lo}};
  } else {
    const auto scan = scan_exchangeability<double>(
        exact_or_double_pmf<double>(s), K, horizon, budget);
    r.residual = scan.residual;
    witness = {{"n", scan.n},
               {"path_a", scan.path_hi},
               {"path_b", scan.path_lo},
               {"g_a", scan.value_hi},
               {"g_b", scan.value_lo}};
  }
  r.witness = witness;
  r.pass = r.residual <= tolerance;
  return r;
}

namespace {

template <class T>
struct CidScan {
  T residual = scalar_from_double<T>(0.0);
  int n = 0;
  std::vector<int> history;
  std::vector<int> event;
  double lhs = 0.0, rhs = 0.0;
};

template <class T>
CidScan<T> scan_cid(const PmfFn<T>& pmf, int alphabet, int horizon,
                    size_t budget, EventIteration events) {
  CidScan<T> best;
  std::vector<int> hist;
  std::vector<unsigned> event_masks;
  if (events == EventIteration::Powerset && alphabet <= 16) {
    for (unsigned m = 1; m < (1u << alphabet); ++m) event_masks.push_back(m);
  } else {
    for (int y = 0; y < alphabet; ++y) event_masks.push_back(1u << y);
  }
  for (int n = 0; n < horizon; ++n) {
    const PathTable<T> g =
        enumerate_paths_serial<T>(alphabet, n, pmf, budget);
    for (size_t idx = 0; idx < g.p.size(); ++idx) {
      if (!(g.p[idx] > scalar_from_double<T>(0.0))) continue;
      g.decode(idx, hist);
      const std::vector<T> sigma_n = pmf(hist);
      // sigma_{n+1}(x, y) for every y
      std::vector<std::vector<T>> sigma_next(alphabet);
      for (int y = 0; y < alphabet; ++y) {
        hist.push_back(y);
        sigma_next[y] = pmf(hist);
        hist.pop_back();
      }
      for (unsigned mask : event_masks) {
        T lhs = scalar_from_double<T>(0.0);
        for (int a = 0; a < alphabet; ++a)
          if (mask & (1u << a)) lhs += sigma_n[a];
        T rhs = scalar_from_double<T>(0.0);
        for (int y = 0; y < alphabet; ++y) {
          T ev = scalar_from_double<T>(0.0);
          for (int a = 0; a < alphabet; ++a)
            if (mask & (1u << a)) ev += sigma_next[y][a];
          rhs += ev * sigma_n[y];
        }
        const T dev = scalar_abs(lhs - rhs);
        if (dev > best.residual) {
          best.residual = dev;
          best.n = n;
          best.history = hist;
          best.event.clear();
          for (int a = 0; a < alphabet; ++a)
            if (mask & (1u << a)) best.event.push_back(a);
          best.lhs = to_double(lhs);
          best.rhs = to_double(rhs);
        }
      }
    }
  }
  return best;
}

}  // namespace

VerificationReport check_cid_exact(const Strategy& s, int horizon,
                                   double tolerance, size_t budget,
                                   EventIteration events) {
  if (s.space() != SpaceTag::Categorical)
    throw SpaceMismatch("exact c.i.d. check needs a categorical space");
  VerificationReport r;
  r.kind = CheckKind::Cid;
  r.family = s.family();
  r.horizon = horizon;
  r.tolerance = tolerance;
  r.method = CheckMethod::Exact;
  const int K = s.alphabet_size();

  auto fill = [&](const auto& scan) {
    r.residual = to_double(scan.residual);
    r.witness = {{"n", scan.n},
                 {"history", scan.history},
                 {"event", scan.event},
                 {"lhs", scan.lhs},
                 {"rhs", scan.rhs}};
  };
  if (s.exact())
    fill(scan_cid<Rational>(exact_or_double_pmf<Rational>(s), K, horizon,
                            budget, events));
  else
    fill(scan_cid<double>(exact_or_double_pmf<double>(s), K, horizon, budget,
                          events));
  r.pass = r.residual <= tolerance;
  return r;
}

namespace {

template <class T>
struct StatScan {
  T residual = scalar_from_double<T>(0.0);
  int n = 0;
  std::vector<int> history;
  double lhs = 0.0, rhs = 0.0;
};

template <class T>
StatScan<T> scan_stationarity(const PmfFn<T>& pmf, int alphabet, int horizon,
                              size_t budget) {
  StatScan<T> best;
  std::vector<int> hist;
  PathTable<T> g_next = enumerate_paths_serial<T>(alphabet, 1, pmf, budget);
  for (int n = 1; n < horizon; ++n) {
    const PathTable<T> g_n = std::move(g_next);
    g_next = enumerate_paths_serial<T>(alphabet, n + 1, pmf, budget);
    const PathTable<T> shifted = marginalize_first(g_next);
    for (size_t idx = 0; idx < g_n.p.size(); ++idx) {
      const T dev = scalar_abs(g_n.p[idx] - shifted.p[idx]);
      if (dev > best.residual) {
        best.residual = dev;
        best.n = n;
        g_n.decode(idx, best.history);
        best.lhs = to_double(g_n.p[idx]);
        best.rhs = to_double(shifted.p[idx]);
      }
    }
  }
  return best;
}

}  // namespace

VerificationReport check_stationarity_exact(const Strategy& s, int horizon,
                                            double tolerance, size_t budget) {
  if (s.space() != SpaceTag::Categorical)
    throw SpaceMismatch("exact stationarity check needs a categorical space");
  VerificationReport r;
  r.kind = CheckKind::Stationarity;
  r.family = s.family();
  r.horizon = horizon;
  r.tolerance = tolerance;
  r.method = CheckMethod::Exact;
  const int K = s.alphabet_size();

  auto fill = [&](const auto& scan) {
    r.residual = to_double(scan.residual);
    r.witness = {{"n", scan.n},
                 {"history", scan.history},
                 {"g_n", scan.lhs},
                 {"shifted", scan.rhs}};
  };
  if (s.exact())
    fill(scan_stationarity<Rational>(exact_or_double_pmf<Rational>(s), K,
                                     horizon, budget));
  else
    fill(scan_stationarity<double>(exact_or_double_pmf<double>(s), K, horizon,
                                   budget));
  r.pass = r.residual <= tolerance;
  return r;
}

VerificationReport check_conditional_exchangeability(
    const ChangePointStrategy& s, int horizon, double tolerance, size_t budget) {
  VerificationReport r;
  r.kind = CheckKind::Exchangeability;
  r.family = s.family() + "|T>n";
  r.horizon = horizon;
  r.tolerance = tolerance;
  r.method = CheckMethod::Exact;
  const int K = s.alphabet_size();
  const CategoricalExact* ex = s.exact();
  if (!ex) throw ParamError("conditional exchangeability needs an exact form");
  const PmfFn<Rational> pmf = [ex](std::span<const int> h) {
    return ex->predictive_exact(h);
  };

  Rational best(0);
  json witness;
  std::vector<int> digits;
  for (int n = 1; n <= horizon; ++n) {
    const PathTable<Rational> g =
        enumerate_paths_serial<Rational>(K, n, pmf, budget);
    // weights of {T > n}: no stop prefix of length <= n-1 fired. Paths
    // outside the event carry conditional probability 0 and stay in their
    // orbits, so a surviving path whose permutation was excluded is a
    // genuine invariance failure.
    Rational total(0);
    std::vector<char> kept(g.p.size(), 0);
    for (size_t idx = 0; idx < g.p.size(); ++idx) {
      g.decode(idx, digits);
      const std::span<const int> pre(digits.data(), n - 1);
      if (s.stop().triggered_by(pre)) continue;
      kept[idx] = 1;
      total += g.p[idx];
    }
    if (!(total > 0)) continue;
    const auto orbits = orbit_stats<Rational>(g, [&](size_t idx) {
      return kept[idx] ? g.p[idx] / total : Rational(0);
    });
    for (const auto& e : orbits) {
      const Rational spread = e.hi - e.lo;
      if (spread > best) {
        best = spread;
        std::vector<int> pa, pb;
        g.decode(e.hi_idx, pa);
        g.decode(e.lo_idx, pb);
        witness = {{"n", n},
                   {"path_a", pa},
                   {"path_b", pb},
                   {"p_a", to_double(e.hi)},
                   {"p_b", to_double(e.lo)}};
      }
    }
  }
  r.residual = to_double(best);
  r.witness = witness;
  r.pass = r.residual <= tolerance;
  return r;
}

// --- quadrature c.i.d. ---------------------------------------------------------

VerificationReport check_cid_quadrature(
    const Strategy& s, std::span<const std::vector<Observation>> histories,
    std::span<const double> z_grid, double tolerance, double quad_tol) {
  VerificationReport r;
  r.kind = CheckKind::CidQuadrature;
  r.family = s.family();
  r.tolerance = tolerance;
  r.method = CheckMethod::Quadrature;

  const auto* hmw = dynamic_cast<const HmwStrategy*>(&s);
  const DensityPredictive* dp = s.density();
  if (!hmw && !dp)
    throw DominationError("quadrature c.i.d. check needs a dominated strategy");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  double residual = 0.0;
  json witness;
  for (const auto& history : histories) {
    r.horizon = std::max(r.horizon, static_cast<int>(history.size()) + 1);
    std::optional<HmwStrategy::Frame> frame;
    if (hmw) frame = hmw->frame(history);
    auto f_n = [&](double z) {
      return frame ? frame->density(z) : dp->predictive_density(history, z);
    };
    std::vector<Observation> extended(history.begin(), history.end());
    extended.emplace_back(Observation::real(0.0));
    auto f_next = [&](double y, double z) {
      if (frame) return frame->child_density(y, z);
      extended.back() = Observation::real(y);
      return dp->predictive_density(extended, z);
    };
    for (double z : z_grid) {
      const double lhs = f_n(z);
      const double rhs =
          integrate([&](double y) { return f_next(y, z) * f_n(y); }, -kInf,
                    kInf, quad_tol)
              .value;
      const double dev = std::fabs(lhs - rhs);
      if (dev > residual) {
        residual = dev;
        json h = json::array();
        for (const auto& o : history) h.push_back(o.real_value());
        witness = {{"history", h}, {"z", z}, {"lhs", lhs}, {"rhs", rhs}};
      }
    }
  }
  r.residual = residual;
  r.witness = witness;
  r.pass = residual <= tolerance;
  return r;
}

std::vector<std::vector<Observation>> sample_histories(const Strategy& s,
                                                       int max_len,
                                                       int per_length,
                                                       Rng& rng) {
  std::vector<std::vector<Observation>> out;
  for (int len = 0; len < max_len; ++len) {
    const int count = len == 0 ? 1 : per_length;
    for (int k = 0; k < count; ++k)
      out.push_back(simulate_path(s, len, rng).points);
  }
  return out;
}

// --- Kolmogorov-Smirnov ----------------------------------------------------------

namespace {
constexpr double kKs01 = 1.628;  // asymptotic 1% critical coefficient
}

KsResult mc_two_sample(std::span<const double> a, std::span<const double> b,
                       double alpha) {
  if (a.size() < 1000 || b.size() < 1000)
    throw SampleSizeError("two-sample KS needs sizes >= 1000");
  if (alpha != 0.01)
    throw ParamError("only the 1% level is tabulated");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const size_t m = sa.size(), n = sb.size();
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < m && j < n) {
    const double x = std::min(sa[i], sb[j]);
    while (i < m && sa[i] <= x) ++i;
    while (j < n && sb[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / m -
                              static_cast<double>(j) / n));
  }
  KsResult r;
  r.statistic = d;
  r.critical = kKs01 * std::sqrt(static_cast<double>(m + n) /
                                 (static_cast<double>(m) * n));
  r.pass = d <= r.critical;
  r.n_a = m;
  r.n_b = n;
  return r;
}

KsResult ks_one_sample(std::span<const double> samples,
                       const std::function<double(double)>& cdf, double alpha) {
  if (samples.size() < 1000)
    throw SampleSizeError("one-sample KS needs size >= 1000");
  if (alpha != 0.01)
    throw ParamError("only the 1% level is tabulated");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const size_t n = s.size();
  double d = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double f = cdf(s[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  KsResult r;
  r.statistic = d;
  r.critical = kKs01 / std::sqrt(static_cast<double>(n));
  r.pass = d <= r.critical;
  r.n_a = n;
  return r;
}

double empirical_cf_distance(std::span<const double> samples,
                             const StableLaw& law,
                             std::span<const double> t_grid, bool parallel) {
  if (t_grid.empty()) throw ParamError("empirical cf needs a t grid");
  if (samples.size() < 10'000)
    throw SampleSizeError("empirical cf distance needs >= 10^4 samples");
  double d = 0.0;
  for (double t : t_grid)
    d = std::max(d, std::abs(empirical_cf(samples, t, parallel) - law.cf(t)));
  return d;
}

VerificationReport report_from_ks(const KsResult& ks, const std::string& family,
                                  std::optional<uint64_t> seed) {
  VerificationReport r;
  r.kind = CheckKind::McTwoSample;
  r.family = family;
  r.residual = ks.statistic;
  r.tolerance = ks.critical;
  r.pass = ks.pass;
  r.method = CheckMethod::MonteCarlo;
  r.sample_size = ks.n_a + ks.n_b;
  r.seed = seed;
  r.witness = {{"n_a", ks.n_a}, {"n_b", ks.n_b}};
  return r;
}

}  // namespace predictive
