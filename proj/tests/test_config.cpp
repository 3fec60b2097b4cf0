#include <doctest.h>

#include "predictive/config.hpp"
#include "predictive/enumerate.hpp"
#include "predictive/toml_lite.hpp"

#include <filesystem>
#include <fstream>

using namespace predictive;
using nlohmann::json;

TEST_CASE("toml parser covers the config subset and matches JSON") {
  const std::string toml = R"(
# a strategy config
family = "dirichlet"

[params]
c = 1.0
labels = ["a", "b"]

[params.base]
uniform = 2

[[checks]]
name = "first"
horizon = 4
expect = "pass"

[[checks]]
name = "second"
values = [1, 2.5,
          3]
inline = { kind = "gaussian", rho = 0.5 }
flag = true
)";
  const json got = parse_toml(toml);
  const json want = json::parse(R"({
    "family": "dirichlet",
    "params": {"c": 1.0, "labels": ["a", "b"], "base": {"uniform": 2}},
    "checks": [
      {"name": "first", "horizon": 4, "expect": "pass"},
      {"name": "second", "values": [1, 2.5, 3],
       "inline": {"kind": "gaussian", "rho": 0.5}, "flag": true}
    ]
  })");
  CHECK(got == want);
}

TEST_CASE("toml errors carry line information") {
  CHECK_THROWS_AS((void)parse_toml("key = \n"), ConfigError);
  CHECK_THROWS_AS((void)parse_toml("x = [1, 2\n"), ConfigError);
}

TEST_CASE("make_strategy builds every family") {
  const std::vector<std::string> specs = {
      R"({"family":"dirichlet","params":{"c":1,"base":{"uniform":2}}})",
      R"({"family":"kernel_dirichlet","params":{"c":1,"base":{"uniform":3},
          "kernel":{"rule":"partition","cells":[[0,1],[2]]}}})",
      R"({"family":"urn","params":{"counts":[1,1,2],"partition":[[0,1],[2]]}})",
      R"({"family":"species_pd","params":{"b":0.5,"c":0.5,
          "base":{"family":"gaussian","mean":0,"var":1}}})",
      R"({"family":"species_gnedin","params":{"b":1,"c":1,
          "base":{"family":"gaussian","mean":0,"var":1}}})",
      R"({"family":"exp_smoothing","params":{"q":0.5,"base":{"uniform":2}}})",
      R"({"family":"recursive_update","params":{"base":{"uniform":3},
          "q":{"kind":"dirichlet","c":1},
          "kernels":[{"rule":"constant"},{"rule":"partition","cells":[[0,1],[2]]}]}})",
      R"({"family":"change_point","params":{
          "beta":{"family":"dirichlet","params":{"c":1,"base":{"uniform":2}}},
          "stop":{"kind":"count_threshold","set":[1],"k":1},"q":0.5}})",
      R"({"family":"hmw","params":{"f0":{"family":"gaussian","mean":0,"var":1},
          "copulas":[{"kind":"gaussian","rho":0.5}]}})",
      R"({"family":"covariate","params":{"b":[0.5,0.75,0.875]}})",
      R"({"family":"stable_ar","params":{"gamma":2,"a":0,"b":1,"c":0.5}})",
      R"({"family":"cyclic_markov","params":{"alphabet":2,"order_plus_one":2,
          "h":[0.1,0.2,0.3,0.4]}})",
      R"({"family":"adversarial","params":{"alphabet":2}})",
  };
  for (const auto& text : specs) {
    const StrategyPtr s = make_strategy(json::parse(text));
    REQUIRE(s != nullptr);
    (void)s->predictive({});  // total on the empty history
  }
  CHECK_THROWS_AS((void)make_strategy(json::parse(R"({"family":"nope"})")),
                  ConfigError);
}

TEST_CASE("uniform bases carry true rational pmfs for exact checks") {
  const json spec = json::parse(
      R"({"family":"dirichlet","params":{"c":1,"base":{"uniform":3}}})");
  const StrategyPtr s = make_strategy(spec);
  REQUIRE(s->exact() != nullptr);
  const auto pmf = s->exact()->predictive_exact({});
  CHECK(pmf[0] == Rational(1, 3));
  CHECK(pmf[0] + pmf[1] + pmf[2] == Rational(1));
}

TEST_CASE("counts base matches the urn normalization exactly") {
  const auto pmf = exact_base_pmf(json::parse(R"({"counts":[1,1,2]})"));
  REQUIRE(pmf.has_value());
  CHECK((*pmf)[0] == Rational(1, 4));
  CHECK((*pmf)[2] == Rational(1, 2));
}

TEST_CASE("config hash is stable and inline JSON loads") {
  const json a = json::parse(R"({"x": 1, "y": [1, 2]})");
  CHECK(config_hash(a) == config_hash(json::parse(R"({"y": [1, 2], "x": 1})")));
  CHECK(config_hash_hex(a).size() == 16);

  const json loaded = load_config(R"({"family":"adversarial"})");
  CHECK(loaded.at("family") == "adversarial");
}

TEST_CASE("strategy specs round-trip through the CLI enumerate path") {
  const StrategyPtr s = make_strategy(json::parse(
      R"({"family":"dirichlet","params":{"c":1,"base":{"uniform":2}}})"));
  const auto t = finite_dim_law(*s, 2);
  CHECK(t.p[0] == doctest::Approx(0.375).epsilon(1e-14));
}

TEST_CASE("copula CSV grids load and validate") {
  const auto dir = std::filesystem::temp_directory_path() / "pred_cfg";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "copula.csv").string();
  {
    std::ofstream out(path);
    out << "# u,v,c\n";
    for (double u : {0.0, 0.5, 1.0})
      for (double v : {0.0, 0.5, 1.0}) out << u << "," << v << ",1.0\n";
  }
  const json spec = json::parse(
      R"({"family":"hmw","params":{"f0":{"family":"gaussian","mean":0,"var":1},
          "copulas":[{"kind":"csv","path":")" + path + R"("}]}})");
  const StrategyPtr s = make_strategy(spec);
  const std::vector<Observation> h{Observation::real(0.3)};
  // independence grid: the predictive density is f0
  CHECK(s->predictive(h).density_at(0.7) == doctest::Approx(0.3122539333667).epsilon(1e-6));
}

TEST_CASE("cyclic Markov h tables load from CSV rows") {
  const auto dir = std::filesystem::temp_directory_path() / "pred_cfg";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "h.csv").string();
  {
    std::ofstream out(path);
    out << "0,0,0.1\n0,1,0.2\n1,0,0.3\n1,1,0.4\n";
  }
  const json spec = json::parse(
      R"({"family":"cyclic_markov","params":{"alphabet":2,"order_plus_one":2,
          "h_csv":")" + path + R"("}})");
  const StrategyPtr s = make_strategy(spec);
  const auto pmf = s->predictive({}).pmf();
  CHECK(pmf[0] == doctest::Approx(0.35).epsilon(1e-12));
}
