#include "predictive/config.hpp"

#include <fstream>
#include <sstream>

#include "predictive/cid.hpp"
#include "predictive/exch.hpp"
#include "predictive/hmw.hpp"
#include "predictive/stationary.hpp"
#include "predictive/toml_lite.hpp"

namespace predictive {

using nlohmann::json;

namespace {

Event event_from_spec(const json& spec, int alphabet) {
  if (spec.is_array())  // list of symbols
    return Event::cat_subset(alphabet, spec.get<std::vector<int>>());
  if (spec.is_object() && spec.contains("interval")) {
    const auto& iv = spec.at("interval");
    return Event::interval(iv.at(0).get<double>(), iv.at(1).get<double>());
  }
  throw ConfigError("unsupported event spec");
}

std::vector<double> csv_column_values(const std::string& path, int columns,
                                      std::vector<std::vector<double>>* coords);

}  // namespace

Measure make_base_measure(const json& spec) {
  if (spec.contains("uniform"))
    return Measure::uniform_categorical(spec.at("uniform").get<int>());
  if (spec.contains("counts")) {
    const auto counts = spec.at("counts").get<std::vector<double>>();
    double total = 0.0;
    for (double c : counts) total += c;
    if (!(total > 0.0)) throw ConfigError("counts must have positive total");
    std::vector<double> pmf;
    pmf.reserve(counts.size());
    for (double c : counts) pmf.push_back(c / total);
    return Measure::categorical(std::move(pmf));
  }
  if (spec.contains("pmf"))
    return Measure::categorical(spec.at("pmf").get<std::vector<double>>());
  if (spec.contains("family")) {
    const std::string f = spec.at("family").get<std::string>();
    if (f == "gaussian")
      return Measure::gaussian(spec.at("mean").get<double>(),
                               spec.at("var").get<double>());
    if (f == "stable")
      return Measure::stable(spec.at("gamma").get<double>(),
                             spec.at("a").get<double>(),
                             spec.at("b").get<double>());
    if (f == "tabulated")
      return Measure::tabulated(spec.at("x").get<std::vector<double>>(),
                                spec.at("pdf").get<std::vector<double>>());
    throw ConfigError("unknown base measure family: " + f);
  }
  if (spec.contains("space")) return Measure::from_json(spec);
  throw ConfigError("unsupported base measure spec");
}

std::optional<std::vector<Rational>> exact_base_pmf(const json& spec) {
  if (spec.contains("uniform")) {
    const int k = spec.at("uniform").get<int>();
    return std::vector<Rational>(k, Rational(1, k));
  }
  if (spec.contains("counts")) {
    const auto counts = spec.at("counts").get<std::vector<double>>();
    Rational total(0);
    std::vector<Rational> pmf;
    pmf.reserve(counts.size());
    for (double c : counts) {
      pmf.emplace_back(rational_from(c));
      total += pmf.back();
    }
    for (auto& v : pmf) v /= total;
    return pmf;
  }
  if (spec.contains("pmf")) {
    std::vector<Rational> pmf;
    for (double v : spec.at("pmf").get<std::vector<double>>())
      pmf.emplace_back(rational_from(v));
    return pmf;
  }
  return std::nullopt;
}

Kernel make_kernel(const json& spec, Measure base) {
  const std::string rule = spec.value("rule", "identity");
  if (rule == "identity") return Kernel::identity(std::move(base));
  if (rule == "constant") return Kernel::constant(std::move(base));
  if (rule == "partition") {
    if (spec.contains("breakpoints"))
      return Kernel::partition_breakpoints(
          std::move(base), spec.at("breakpoints").get<std::vector<double>>());
    return Kernel::partition_subsets(
        std::move(base),
        spec.at("cells").get<std::vector<std::vector<int>>>());
  }
  if (rule == "set_augmented") {
    const int alphabet = base.alphabet_size();
    std::vector<Event> cells;
    if (spec.contains("breakpoints")) {
      Kernel tmp = Kernel::partition_breakpoints(
          base, spec.at("breakpoints").get<std::vector<double>>());
      cells = tmp.cells();
    } else {
      for (const auto& c : spec.at("cells"))
        cells.push_back(Event::cat_subset(alphabet, c.get<std::vector<int>>()));
    }
    Event augment = event_from_spec(spec.at("set"), alphabet);
    return Kernel::set_augmented(std::move(base), std::move(cells),
                                 std::move(augment));
  }
  throw ConfigError("unknown kernel rule: " + rule);
}

Alphabet alphabet_from_spec(const json& spec, int size) {
  Alphabet a;
  a.size = size;
  if (spec.contains("params") && spec.at("params").contains("labels"))
    a.labels = spec.at("params").at("labels").get<std::vector<std::string>>();
  return a;
}

namespace {

QSchedule qschedule_from_spec(const json& spec, int alphabet) {
  if (spec.is_number()) return QSchedule::constant(spec.get<double>());
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "constant") return QSchedule::constant(spec.at("q").get<double>());
  if (kind == "dirichlet")
    return QSchedule::dirichlet_like(spec.at("c").get<double>());
  if (kind == "by_n")
    return QSchedule::by_n(spec.at("values").get<std::vector<double>>());
  if (kind == "by_count")
    return QSchedule::by_count(event_from_spec(spec.at("set"), alphabet),
                               spec.at("values").get<std::vector<double>>());
  throw ConfigError("unknown q schedule kind: " + kind);
}

StopRule stop_from_spec(const json& spec, int alphabet) {
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "count_threshold")
    return StopRule::count_threshold(event_from_spec(spec.at("set"), alphabet),
                                     spec.value("k", 1));
  if (kind == "single_horizon")
    return StopRule::single_horizon(spec.at("n").get<int>(),
                                    event_from_spec(spec.at("set"), alphabet),
                                    spec.at("counts").get<std::vector<int>>());
  if (kind == "table") {
    std::map<int, std::vector<std::vector<int>>> table;
    for (const auto& entry : spec.at("sets"))
      table[entry.at("n").get<int>()] =
          entry.at("histories").get<std::vector<std::vector<int>>>();
    return StopRule::explicit_table(std::move(table));
  }
  if (kind == "never") return StopRule::never();
  throw ConfigError("unknown stop rule kind: " + kind);
}

Copula copula_from_spec(const json& spec) {
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "independence") return Copula::independence();
  if (kind == "gaussian") return Copula::gaussian(spec.at("rho").get<double>());
  if (kind == "csv") {
    std::vector<std::vector<double>> coords;
    std::vector<double> values =
        csv_column_values(spec.at("path").get<std::string>(), 2, &coords);
    // regular grid reconstruction from (u, v, c) rows
    std::vector<double> us = coords[0], vs = coords[1];
    std::sort(us.begin(), us.end());
    us.erase(std::unique(us.begin(), us.end()), us.end());
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    if (us.size() * vs.size() != values.size())
      throw ConfigError("copula CSV is not a full regular grid");
    std::vector<double> grid(values.size(), -1.0);
    auto find = [](const std::vector<double>& g, double x) {
      return static_cast<size_t>(
          std::lower_bound(g.begin(), g.end(), x) - g.begin());
    };
    for (size_t r = 0; r < values.size(); ++r) {
      const size_t i = find(us, coords[0][r]);
      const size_t j = find(vs, coords[1][r]);
      grid[i * vs.size() + j] = values[r];
    }
    return Copula::tabulated(std::move(us), std::move(vs), std::move(grid),
                             spec.value("marginal_tol", 1e-3));
  }
  throw ConfigError("unknown copula kind: " + kind);
}

std::vector<double> csv_column_values(const std::string& path, int columns,
                                      std::vector<std::vector<double>>* coords) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CSV: " + path);
  coords->assign(columns, {});
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (static_cast<int>(row.size()) != columns + 1)
      throw ConfigError("CSV row width mismatch in " + path);
    for (int c = 0; c < columns; ++c) (*coords)[c].push_back(row[c]);
    values.push_back(row.back());
  }
  return values;
}

}  // namespace

StrategyPtr make_strategy(const json& spec) {
  const std::string family = spec.at("family").get<std::string>();
  const json params = spec.value("params", json::object());

  if (family == "dirichlet" || family == "kernel_dirichlet") {
    Measure base = make_base_measure(params.at("base"));
    Kernel kernel = params.contains("kernel")
                        ? make_kernel(params.at("kernel"), base)
                        : Kernel::identity(base);
    return std::make_shared<DirichletStrategy>(
        params.at("c").get<double>(), std::move(base), std::move(kernel),
        exact_base_pmf(params.at("base")));
  }
  if (family == "urn") {
    std::vector<Rational> counts;
    for (double c : params.at("counts").get<std::vector<double>>())
      counts.emplace_back(rational_from(c));
    return std::make_shared<UrnStrategy>(UrnParams(
        std::move(counts),
        params.at("partition").get<std::vector<std::vector<int>>>()));
  }
  if (family == "species_pd" || family == "species_gnedin") {
    const auto rule = family == "species_pd"
                          ? SpeciesWeights::Rule::PoissonDirichlet
                          : SpeciesWeights::Rule::Gnedin;
    return std::make_shared<SpeciesStrategy>(
        SpeciesWeights(rule, params.at("b").get<double>(),
                       params.at("c").get<double>()),
        make_base_measure(params.at("base")));
  }
  if (family == "exp_smoothing") {
    Measure base = make_base_measure(params.at("base"));
    return std::make_shared<ExpSmoothingStrategy>(
        params.at("q").get<double>(), std::move(base),
        exact_base_pmf(params.at("base")));
  }
  if (family == "recursive_update") {
    Measure base = make_base_measure(params.at("base"));
    std::vector<Kernel> kernels;
    for (const auto& k : params.at("kernels"))
      kernels.push_back(make_kernel(k, base));
    QSchedule q = qschedule_from_spec(params.at("q"), base.alphabet_size());
    return std::make_shared<RecursiveUpdateStrategy>(
        std::move(base), std::move(q), std::move(kernels),
        exact_base_pmf(params.at("base")));
  }
  if (family == "change_point") {
    StrategyPtr beta = make_strategy(params.at("beta"));
    const int alphabet = beta->alphabet_size();
    StopRule stop = stop_from_spec(params.at("stop"), alphabet);
    QSchedule q = qschedule_from_spec(params.at("q"), alphabet);
    PostMode post = params.value("post", "delta") == std::string("conditional")
                        ? PostMode::Conditional
                        : PostMode::Delta;
    std::vector<Event> cells;
    if (params.contains("partition"))
      for (const auto& c : params.at("partition"))
        cells.push_back(Event::cat_subset(alphabet, c.get<std::vector<int>>()));
    return std::make_shared<ChangePointStrategy>(std::move(beta), std::move(stop),
                                                 std::move(q), post,
                                                 std::move(cells));
  }
  if (family == "hmw") {
    Measure f0 = make_base_measure(params.at("f0"));
    std::vector<Copula> copulas;
    for (const auto& c : params.at("copulas")) copulas.push_back(copula_from_spec(c));
    HmwGrid grid;
    if (params.contains("grid")) {
      const auto& g = params.at("grid");
      grid.points = g.value("points", grid.points);
      grid.tail_mass = g.value("tail_mass", grid.tail_mass);
      grid.pad_fraction = g.value("pad_fraction", grid.pad_fraction);
    }
    return std::make_shared<HmwStrategy>(std::move(f0), std::move(copulas), grid);
  }
  if (family == "covariate") {
    return std::make_shared<CovariateStrategy>(
        params.at("b").get<std::vector<double>>());
  }
  if (family == "stable_ar") {
    return std::make_shared<StableArStrategy>(StableArParams(
        params.at("gamma").get<double>(), params.at("a").get<double>(),
        params.at("b").get<double>(), params.at("c").get<double>()));
  }
  if (family == "cyclic_markov") {
    const int block = params.at("order_plus_one").get<int>();
    if (params.contains("axis")) {
      return std::make_shared<CyclicMarkovGridStrategy>(
          params.at("axis").get<std::vector<double>>(), block,
          params.at("h").get<std::vector<double>>());
    }
    std::vector<double> h;
    if (params.contains("h_csv")) {
      std::vector<std::vector<double>> coords;
      // rows: coordinates..., value; coordinates give the flat index
      h.assign(
          [&] {
            size_t size = 1;
            const int alphabet = params.at("alphabet").get<int>();
            for (int i = 0; i < block; ++i) size *= alphabet;
            return size;
          }(),
          -1.0);
      const int alphabet = params.at("alphabet").get<int>();
      std::vector<double> vals = csv_column_values(
          params.at("h_csv").get<std::string>(), block, &coords);
      for (size_t r = 0; r < vals.size(); ++r) {
        size_t idx = 0;
        for (int c = 0; c < block; ++c)
          idx = idx * alphabet + static_cast<size_t>(coords[c][r]);
        h[idx] = vals[r];
      }
      for (double v : h)
        if (v < 0.0) throw ConfigError("h CSV does not cover every tuple");
    } else {
      h = params.at("h").get<std::vector<double>>();
    }
    return std::make_shared<CyclicMarkovStrategy>(
        params.at("alphabet").get<int>(), block, h);
  }
  if (family == "adversarial") {
    return std::make_shared<AdversarialStrategy>(
        params.value("alphabet", 2));
  }
  throw ConfigError("unknown strategy family: " + family);
}

json load_config(const std::string& path_or_inline) {
  if (!path_or_inline.empty() && path_or_inline.front() == '{')
    return json::parse(path_or_inline);
  std::ifstream in(path_or_inline);
  if (!in) throw ConfigError("cannot open config: " + path_or_inline);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (path_or_inline.size() >= 5 &&
      path_or_inline.substr(path_or_inline.size() - 5) == ".toml")
    return parse_toml(text);
  if (path_or_inline.size() >= 5 &&
      path_or_inline.substr(path_or_inline.size() - 5) == ".json")
    return json::parse(text);
  // sniff: JSON configs here are objects; anything else is treated as TOML
  const size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{')
    return json::parse(text);
  return parse_toml(text);
}

uint64_t config_hash(const json& j) {
  const std::string dump = j.dump();
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string config_hash_hex(const json& j) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(config_hash(j)));
  return std::string(buf);
}

}  // namespace predictive
