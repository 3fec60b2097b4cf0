#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "predictive/kernel.hpp"
#include "predictive/measure.hpp"
#include "predictive/quadrature.hpp"

using namespace predictive;

namespace {
const Observation kA = Observation::cat(0);
const Observation kB = Observation::cat(1);
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("mix: weighted union of atoms and densities") {
  const Measure delta_a = Measure::point_mass(kA, 2);
  const Measure uniform = Measure::uniform_categorical(2);

  const Measure m = mix({{0.5, delta_a}, {0.5, uniform}});
  CHECK(m.prob(Event::cat_subset(2, {0})) == doctest::Approx(0.75).epsilon(1e-14));

  const Measure id = mix({{1.0, uniform}});
  CHECK(id == uniform);

  const Measure m2 = mix({{0.25, uniform},
                          {0.25, delta_a},
                          {0.5, Measure::point_mass(kB, 2)}});
  CHECK(m2.prob(Event::cat_subset(2, {0})) == doctest::Approx(0.375).epsilon(1e-14));

  CHECK_THROWS_AS((void)mix({{0.5, uniform}, {0.6, delta_a}}), NormalizationError);
  CHECK_THROWS_AS((void)mix({{0.5, uniform}, {0.5, Measure::gaussian(0, 1)}}),
                  SpaceMismatch);
}

TEST_CASE("prob: atoms, pmfs and densities") {
  CHECK(Measure::point_mass(kA, 2).prob(Event::cat_subset(2, {0})) == 1.0);
  CHECK(Measure::uniform_categorical(3).prob(Event::cat_subset(3, {0, 1})) ==
        doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(Measure::gaussian(0, 1).prob(Event::interval(-kInf, 0)) ==
        doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("prob is finitely additive over disjoint events") {
  const Measure m = mix({{0.3, Measure::point_mass(Observation::real(0.5))},
                         {0.7, Measure::gaussian(0, 2)}});
  const Event a = Event::interval(-kInf, 0.0, false, true);
  const Event b = Event::interval(0.0, 1.5, false, true);
  const Event ab = Event::interval(-kInf, 1.5, false, true);
  CHECK(std::fabs(m.prob(ab) - m.prob(a) - m.prob(b)) <= 1e-12);

  const Measure c = Measure::uniform_categorical(4);
  CHECK(std::fabs(c.prob(Event::cat_subset(4, {0, 2})) -
                  c.prob(Event::cat_subset(4, {0})) -
                  c.prob(Event::cat_subset(4, {2}))) <= 1e-12);
}

TEST_CASE("condition: renormalized restriction") {
  const Measure u3 = Measure::uniform_categorical(3);
  const Measure cond = u3.condition(Event::cat_subset(3, {0, 1}));
  const auto pmf = cond.pmf();
  CHECK(pmf[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pmf[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pmf[2] == 0.0);

  const Measure da = Measure::point_mass(kA, 2);
  CHECK(da.condition(Event::cat_subset(2, {0})) == da);

  // half-normal: P([1, inf) | X >= 0) = 2 (1 - Phi(1)), closed-form oracle
  const Measure half = Measure::gaussian(0, 1).condition(Event::interval(0, kInf));
  const double expected = std::erfc(1.0 / std::sqrt(2.0));
  CHECK(half.prob(Event::interval(1, kInf)) ==
        doctest::Approx(expected).epsilon(1e-12));

  CHECK_THROWS_AS((void)u3.condition(Event::cat_subset(3, {})), ConditioningError);
}

TEST_CASE("condition on the full space is the identity, component-wise") {
  const Measure m = mix({{0.25, Measure::point_mass(Observation::real(1.5))},
                         {0.75, Measure::gaussian(0, 1)}});
  CHECK(m.condition(Event::real_full()) == m);
  const Measure u3 = Measure::uniform_categorical(3);
  CHECK(u3.condition(Event::cat_full(3)) == u3);
}

TEST_CASE("sample: determinism and point masses") {
  const Measure da = Measure::point_mass(kA, 2);
  Rng rng(123);
  CHECK(da.sample(rng) == kA);

  const Measure u2 = Measure::uniform_categorical(2);
  Rng r1(42), r2(42);
  for (int i = 0; i < 100; ++i) CHECK(u2.sample(r1) == u2.sample(r2));
}

TEST_CASE("sample: empirical law matches prob") {
  const Measure u2 = Measure::uniform_categorical(2);
  Rng rng(42);
  const int n = 1'000'000;
  int ones = 0;
  for (int i = 0; i < n; ++i)
    if (u2.sample(rng).cat_index() == 1) ++ones;
  CHECK(std::fabs(static_cast<double>(ones) / n - 0.5) < 0.002);

  // per-symbol 4 sigma bound on a skewed pmf
  const Measure skew = Measure::categorical({0.1, 0.2, 0.7});
  Rng rng2(7);
  int counts[3] = {0, 0, 0};
  const int m = 1'000'000;
  for (int i = 0; i < m; ++i) ++counts[skew.sample(rng2).cat_index()];
  const double probs[3] = {0.1, 0.2, 0.7};
  for (int s = 0; s < 3; ++s) {
    const double bound = 4.0 * std::sqrt(probs[s] * (1 - probs[s]) / m);
    CHECK(std::fabs(static_cast<double>(counts[s]) / m - probs[s]) <= bound);
  }
}

TEST_CASE("sampling a continuous component reproduces its law") {
  const Measure g = Measure::gaussian(1.0, 4.0);
  Rng rng(9);
  double sum = 0.0, sumsq = 0.0;
  const int n = 200'000;
  for (int i = 0; i < n; ++i) {
    const double x = g.sample(rng).real_value();
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(mean == doctest::Approx(1.0).epsilon(0.02));
  CHECK(var == doctest::Approx(4.0).epsilon(0.03));
}

TEST_CASE("kernel_apply: the four rules") {
  const Measure u3 = Measure::uniform_categorical(3);

  const Kernel ident = Kernel::identity(Measure::uniform_categorical(4));
  const Measure d3 = ident.apply(Observation::cat(3));
  CHECK(d3.prob(Event::cat_subset(4, {3})) == 1.0);

  const Kernel part = Kernel::partition_subsets(u3, {{0, 1}, {2}});
  const auto p = part.apply(Observation::cat(0)).pmf();
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p[2] == 0.0);

  const Kernel aug = Kernel::set_augmented(
      u3, {Event::cat_subset(3, {0, 1}), Event::cat_subset(3, {2})},
      Event::cat_subset(3, {2}));
  CHECK(aug.apply(Observation::cat(2)).prob(Event::cat_subset(3, {2})) == 1.0);
  const auto q = aug.apply(Observation::cat(0)).pmf();
  CHECK(q[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(q[1] == doctest::Approx(0.5).epsilon(1e-14));

  const Kernel cons = Kernel::constant(u3);
  CHECK(cons.apply(Observation::cat(0)) == cons.apply(Observation::cat(2)));

  CHECK_THROWS_AS(
      (void)Kernel::partition_subsets(u3, {{0}, {0, 1, 2}}), ParamError);
  CHECK_THROWS_AS((void)Kernel::partition_subsets(u3, {{0, 1}}), ParamError);
}

TEST_CASE("real-line partition kernels condition the base") {
  const Measure g = Measure::gaussian(0, 1);
  const Kernel part = Kernel::partition_breakpoints(g, {0.0});
  const Measure neg = part.apply(Observation::real(-1.0));
  CHECK(neg.prob(Event::interval(-kInf, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(neg.has_atoms());
  // conditional of the conditional composes
  const Measure tail = neg.condition(Event::interval(-kInf, -1.0, false, true));
  CHECK(tail.prob(Event::interval(-1.0, kInf)) == doctest::Approx(0.0));
}

TEST_CASE("measure JSON round-trip is lossless") {
  const Measure m = mix(
      {{0.1, Measure::point_mass(Observation::real(1.0 / 3.0))},
       {0.4, Measure::gaussian(0.1, 1e-300 + 2.0)},
       {0.5, Measure::stable(1.5, -0.25, 3.0)}});
  const auto j = m.to_json();
  const auto text = j.dump();
  const Measure back = Measure::from_json(nlohmann::json::parse(text));
  CHECK(back == m);

  const Measure c = Measure::categorical({0.1, 0.9});
  CHECK(Measure::from_json(nlohmann::json::parse(c.to_json().dump())) == c);
}

TEST_CASE("chain_value: atom mass where an atom sits, density elsewhere") {
  const Measure m = mix({{0.25, Measure::point_mass(Observation::real(2.0))},
                         {0.75, Measure::gaussian(0, 1)}});
  CHECK(m.chain_value(Observation::real(2.0)) == doctest::Approx(0.25));
  CHECK(m.chain_value(Observation::real(0.0)) ==
        doctest::Approx(0.75 * norm_pdf(0.0)).epsilon(1e-14));
  // purely atomic real measure carries no density anywhere else
  const Measure da = Measure::point_mass(Observation::real(1.0));
  CHECK(da.chain_value(Observation::real(0.5)) == 0.0);
}

TEST_CASE("quadrature meets its tolerance and reports failures") {
  const auto r = integrate([](double x) { return norm_pdf(x); }, -kInf, kInf);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.abs_err <= 1e-8);
}

TEST_CASE("a divergent integrand raises IntegrationError with a residual") {
  bool threw = false;
  try {
    (void)integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-10);
  } catch (const IntegrationError& e) {
    threw = true;
    CHECK(e.residual > 1e-10);
  }
  CHECK(threw);
}

TEST_CASE("set-augmented kernels on the real line") {
  // x in A = [-1, 1] passes through as a point mass; otherwise condition on
  // the cell minus A
  const Measure g = Measure::gaussian(0, 1);
  Kernel part = Kernel::partition_breakpoints(g, {0.0});
  const Kernel beta = Kernel::set_augmented(g, part.cells(),
                                            Event::interval(-1.0, 1.0));
  const Measure inside = beta.apply(Observation::real(0.5));
  CHECK(inside.mass_at(Observation::real(0.5)) == 1.0);

  const Measure outside = beta.apply(Observation::real(2.0));
  CHECK_FALSE(outside.has_atoms());
  CHECK(outside.prob(Event::interval(1.0, kInf, false, false)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}
