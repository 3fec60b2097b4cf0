#pragma once

#include <functional>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "predictive/enumerate.hpp"
#include "predictive/stable_law.hpp"
#include "predictive/strategy.hpp"

namespace predictive {

enum class CheckKind {
  Exchangeability,
  Cid,
  Stationarity,
  CidQuadrature,
  McTwoSample,
  CfDistance,
};

enum class CheckMethod { Exact, Quadrature, MonteCarlo };

const char* check_kind_name(CheckKind k);
const char* check_method_name(CheckMethod m);

struct VerificationReport {
  CheckKind kind = CheckKind::Exchangeability;
  std::string family;
  int horizon = 0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  CheckMethod method = CheckMethod::Exact;
  nlohmann::json witness;  // history / permutation / event attaining the max
  std::optional<size_t> sample_size;
  std::optional<uint64_t> seed;

  nlohmann::json to_json() const;
  static std::string csv_header();
  std::string csv_row() const;
};

// How the c.i.d. checker iterates events: the full power set (default on
// small alphabets) or singletons only.
enum class EventIteration { Powerset, Singletons };

// Exchangeability (Theorem 4): residual = max over n <= horizon, paths x and
// permutations phi of |g_n(x) - g_n(phi(x))|. Runs in rational arithmetic
// whenever the strategy exposes an exact form.
VerificationReport check_exchangeability_exact(const Strategy& s, int horizon,
                                               double tolerance = 1e-12,
                                               size_t budget = 1'000'000);

// C.i.d. fixed point (Theorem 6): residual = max over n < horizon, histories
// with positive path probability and events A of
// |sigma_n(x, A) - sum_y sigma_{n+1}(x, y, A) sigma_n(x, {y})|.
VerificationReport check_cid_exact(const Strategy& s, int horizon,
                                   double tolerance = 1e-12,
                                   size_t budget = 1'000'000,
                                   EventIteration events = EventIteration::Powerset);

// Stationarity (Theorem 4): residual = max over 1 <= n < horizon and x of
// |g_n(x) - sum_u g_{n+1}(u, x)|.
VerificationReport check_stationarity_exact(const Strategy& s, int horizon,
                                            double tolerance = 1e-12,
                                            size_t budget = 1'000'000);

// Conditional exchangeability given {T > n} (Theorem 3): permutation residual
// of the conditional law for every n <= horizon with P(T > n) > 0.
class ChangePointStrategy;
VerificationReport check_conditional_exchangeability(
    const ChangePointStrategy& s, int horizon, double tolerance = 1e-12,
    size_t budget = 1'000'000);

// C.i.d. fixed point for dominated strategies by quadrature:
// residual = max over supplied histories and z of
// |f_n(z|x) - Int f_{n+1}(z|x,y) f_n(y|x) dy|.
VerificationReport check_cid_quadrature(
    const Strategy& s, std::span<const std::vector<Observation>> histories,
    std::span<const double> z_grid, double tolerance = 1e-5,
    double quad_tol = 1e-8);

// Histories simulated from the strategy itself (lengths 0..max_len-1).
std::vector<std::vector<Observation>> sample_histories(const Strategy& s,
                                                       int max_len,
                                                       int per_length,
                                                       Rng& rng);

struct KsResult {
  double statistic = 0.0;
  double critical = 0.0;
  bool pass = false;
  size_t n_a = 0, n_b = 0;
};

// Two-sample Kolmogorov-Smirnov at level alpha (asymptotic critical value
// c(alpha) sqrt((m+n)/(mn)), c(0.01) = 1.628). Sizes below 10^3 are refused.
KsResult mc_two_sample(std::span<const double> a, std::span<const double> b,
                       double alpha = 0.01);

// One-sample variant against a closed-form CDF.
KsResult ks_one_sample(std::span<const double> samples,
                       const std::function<double(double)>& cdf,
                       double alpha = 0.01);

// Sup over the t grid of |empirical cf - stable cf|.
double empirical_cf_distance(std::span<const double> samples,
                             const StableLaw& law,
                             std::span<const double> t_grid,
                             bool parallel = true);

VerificationReport report_from_ks(const KsResult& ks, const std::string& family,
                                  std::optional<uint64_t> seed);

}  // namespace predictive
