#include "predictive/measure.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "predictive/errors.hpp"

namespace predictive {

using nlohmann::json;

namespace {
constexpr double kMassTol = 1e-12;
}

void Measure::validate() const {
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (a.weight < 0.0) throw NormalizationError("negative atom weight");
    if (a.point.space() != space_) throw SpaceMismatch("atom space mismatch");
    if (space_ == SpaceTag::Categorical && a.point.cat_index() >= alphabet_)
      throw ParamError("atom index outside alphabet");
    total += a.weight;
  }
  for (const auto& [w, d] : densities_) {
    if (w < 0.0) throw NormalizationError("negative density weight");
    if (d.space() != space_) throw SpaceMismatch("density space mismatch");
    if (space_ == SpaceTag::Categorical && d.alphabet_size() != alphabet_)
      throw SpaceMismatch("pmf alphabet size mismatch");
    total += w;
  }
  if (std::fabs(total - 1.0) > kMassTol) {
    std::ostringstream os;
    os << "measure mass " << total << " differs from 1 by more than 1e-12";
    throw NormalizationError(os.str());
  }
}

Measure Measure::point_mass(const Observation& x, int alphabet_size) {
  Measure m;
  m.space_ = x.space();
  m.alphabet_ = alphabet_size;
  if (m.space_ == SpaceTag::Categorical && x.cat_index() >= alphabet_size)
    throw ParamError("point mass index outside alphabet");
  m.atoms_.push_back({x, 1.0});
  m.validate();
  return m;
}

Measure Measure::categorical(std::vector<double> pmf) {
  Measure m;
  m.space_ = SpaceTag::Categorical;
  m.alphabet_ = static_cast<int>(pmf.size());
  m.densities_.emplace_back(1.0, Density(CategoricalPmf{std::move(pmf)}));
  m.validate();
  return m;
}

Measure Measure::uniform_categorical(int alphabet_size) {
  if (alphabet_size <= 0) throw ParamError("alphabet size must be positive");
  return categorical(
      std::vector<double>(alphabet_size, 1.0 / alphabet_size));
}

Measure Measure::gaussian(double mean, double var) {
  if (!(var > 0.0)) throw ParamError("gaussian variance must be positive");
  Measure m;
  m.space_ = SpaceTag::Real;
  m.densities_.emplace_back(1.0, Density(GaussianDensity{mean, var}));
  return m;
}

Measure Measure::stable(double gamma, double a, double b) {
  Measure m;
  m.space_ = SpaceTag::Real;
  m.densities_.emplace_back(1.0, Density(StableDensity{StableLaw(gamma, a, b)}));
  return m;
}

Measure Measure::tabulated(std::vector<double> x, std::vector<double> pdf) {
  Measure m;
  m.space_ = SpaceTag::Real;
  m.densities_.emplace_back(1.0,
                            Density(TabulatedDensity(std::move(x), std::move(pdf))));
  return m;
}

Measure Measure::from_parts(SpaceTag space, int alphabet_size,
                            std::vector<Atom> atoms,
                            std::vector<std::pair<double, Density>> densities) {
  Measure m;
  m.space_ = space;
  m.alphabet_ = alphabet_size;
  m.atoms_ = std::move(atoms);
  m.densities_ = std::move(densities);
  m.validate();
  return m;
}

double Measure::prob(const Event& event) const {
  if (space_ == SpaceTag::RealPair)
    throw SpaceMismatch("events on real pairs are not supported");
  if (event.space() != space_) throw SpaceMismatch("event space mismatch");
  double s = 0.0;
  for (const auto& a : atoms_)
    if (event.contains(a.point)) s += a.weight;
  for (const auto& [w, d] : densities_) s += w * d.mass(event);
  return s;
}

Measure Measure::condition(const Event& event) const {
  const double total = prob(event);
  if (!(total > 0.0))
    throw ConditioningError("conditioning on a zero-probability event: " +
                            event.describe());
  Measure out;
  out.space_ = space_;
  out.alphabet_ = alphabet_;
  for (const auto& a : atoms_)
    if (event.contains(a.point)) out.atoms_.push_back({a.point, a.weight / total});
  for (const auto& [w, d] : densities_) {
    const double dm = d.mass(event);
    if (!(w * dm > 0.0)) continue;
    // a component fully inside the event passes through unchanged
    out.densities_.emplace_back(w * dm / total,
                                dm == 1.0 ? d : d.restrict(event));
  }
  out.validate();
  return out;
}

Observation Measure::sample(Rng& rng) const {
  // Inverse CDF over the component list: atoms first, then densities, in
  // stored order; ties resolve to the lowest index.
  const double u = rng.u01();
  double cum = 0.0;
  for (const auto& a : atoms_) {
    cum += a.weight;
    if (u < cum) return a.point;
  }
  for (size_t i = 0; i < densities_.size(); ++i) {
    cum += densities_[i].first;
    if (u < cum || i + 1 == densities_.size())
      return densities_[i].second.sample(rng);
  }
  if (!atoms_.empty()) return atoms_.back().point;
  throw SupportError("cannot sample from an empty measure");
}

double Measure::mass_at(const Observation& x) const {
  if (x.space() != space_) throw SpaceMismatch("observation space mismatch");
  double s = 0.0;
  for (const auto& a : atoms_)
    if (a.point == x) s += a.weight;
  if (space_ == SpaceTag::Categorical)
    for (const auto& [w, d] : densities_) s += w * d.pmf_at(x.cat_index());
  return s;
}

double Measure::density_at(double x) const {
  if (space_ != SpaceTag::Real)
    throw SpaceMismatch("density_at requires a real-space measure");
  double s = 0.0;
  for (const auto& [w, d] : densities_) s += w * d.density_at(x);
  return s;
}

double Measure::pair_density_at(const RealPair& p) const {
  if (space_ != SpaceTag::RealPair)
    throw SpaceMismatch("pair_density_at requires a real-pair measure");
  double s = 0.0;
  for (const auto& [w, d] : densities_) s += w * d.pair_density_at(p);
  return s;
}

double Measure::chain_value(const Observation& x) const {
  if (space_ == SpaceTag::Categorical) return mass_at(x);
  if (space_ == SpaceTag::RealPair) {
    double s = 0.0;
    for (const auto& a : atoms_)
      if (a.point == x) s += a.weight;
    if (s > 0.0) return s;
    return pair_density_at(x.pair_value());
  }
  const double atom_mass = [&] {
    double s = 0.0;
    for (const auto& a : atoms_)
      if (a.point == x) s += a.weight;
    return s;
  }();
  if (atom_mass > 0.0) return atom_mass;
  if (!densities_.empty()) return density_at(x.real_value());
  return 0.0;
}

std::vector<double> Measure::pmf() const {
  if (space_ != SpaceTag::Categorical)
    throw SpaceMismatch("pmf requires a categorical measure");
  std::vector<double> p(alphabet_, 0.0);
  for (const auto& a : atoms_) p[a.point.cat_index()] += a.weight;
  for (const auto& [w, d] : densities_)
    for (int i = 0; i < alphabet_; ++i) p[i] += w * d.pmf_at(i);
  return p;
}

Measure Measure::marginal_x() const {
  if (space_ != SpaceTag::RealPair)
    throw SpaceMismatch("marginal_x requires a real-pair measure");
  std::vector<std::pair<double, Density>> ds;
  std::vector<Atom> atoms;
  for (const auto& a : atoms_)
    atoms.push_back({Observation::real(a.point.pair_value().x), a.weight});
  for (const auto& [w, d] : densities_) {
    const auto& k = std::get<PairGaussianDensity>(d.kind());
    // X = U + V with U ~ N(mean_u, var_u), V ~ N(0, var_v)
    ds.emplace_back(w, Density(GaussianDensity{k.mean_u, k.var_u + k.var_v}));
  }
  return from_parts(SpaceTag::Real, 0, std::move(atoms), std::move(ds));
}

Measure Measure::marginal_z() const {
  if (space_ != SpaceTag::RealPair)
    throw SpaceMismatch("marginal_z requires a real-pair measure");
  std::vector<std::pair<double, Density>> ds;
  std::vector<Atom> atoms;
  for (const auto& a : atoms_)
    atoms.push_back({Observation::real(a.point.pair_value().z), a.weight});
  for (const auto& [w, d] : densities_) {
    const auto& k = std::get<PairGaussianDensity>(d.kind());
    ds.emplace_back(w, Density(GaussianDensity{0.0, k.var_v}));
  }
  return from_parts(SpaceTag::Real, 0, std::move(atoms), std::move(ds));
}

bool Measure::operator==(const Measure& other) const {
  if (space_ != other.space_ || alphabet_ != other.alphabet_) return false;
  if (atoms_.size() != other.atoms_.size() ||
      densities_.size() != other.densities_.size())
    return false;
  for (size_t i = 0; i < atoms_.size(); ++i)
    if (!(atoms_[i].point == other.atoms_[i].point) ||
        atoms_[i].weight != other.atoms_[i].weight)
      return false;
  for (size_t i = 0; i < densities_.size(); ++i)
    if (densities_[i].first != other.densities_[i].first ||
        !(densities_[i].second == other.densities_[i].second))
      return false;
  return true;
}

json Measure::to_json() const {
  json atoms = json::array();
  for (const auto& a : atoms_) {
    json v;
    switch (space_) {
      case SpaceTag::Categorical: v = a.point.cat_index(); break;
      case SpaceTag::Real: v = a.point.real_value(); break;
      case SpaceTag::RealPair:
        v = json::array({a.point.pair_value().x, a.point.pair_value().z});
        break;
    }
    atoms.push_back(json::array({v, a.weight}));
  }
  json densities = json::array();
  for (const auto& [w, d] : densities_) {
    json dj = d.to_json();
    dj["weight"] = w;
    densities.push_back(dj);
  }
  json j{{"space", space_name(space_)}, {"atoms", atoms}, {"densities", densities}};
  if (space_ == SpaceTag::Categorical) j["alphabet_size"] = alphabet_;
  return j;
}

Measure Measure::from_json(const json& j) {
  const std::string sp = j.at("space").get<std::string>();
  SpaceTag space;
  if (sp == "categorical") space = SpaceTag::Categorical;
  else if (sp == "real") space = SpaceTag::Real;
  else if (sp == "real_pair") space = SpaceTag::RealPair;
  else throw ConfigError("unknown space tag: " + sp);

  int alphabet = j.value("alphabet_size", 0);
  std::vector<Atom> atoms;
  for (const auto& e : j.value("atoms", json::array())) {
    const auto& v = e.at(0);
    Observation o;
    switch (space) {
      case SpaceTag::Categorical: o = Observation::cat(v.get<int>()); break;
      case SpaceTag::Real: o = Observation::real(v.get<double>()); break;
      case SpaceTag::RealPair:
        o = Observation::pair(v.at(0).get<double>(), v.at(1).get<double>());
        break;
    }
    atoms.push_back({o, e.at(1).get<double>()});
  }
  std::vector<std::pair<double, Density>> densities;
  for (const auto& e : j.value("densities", json::array()))
    densities.emplace_back(e.at("weight").get<double>(), Density::from_json(e));
  return from_parts(space, alphabet, std::move(atoms), std::move(densities));
}

Measure mix(std::span<const std::pair<double, Measure>> components) {
  if (components.empty()) throw ParamError("mix of zero components");
  double wsum = 0.0;
  for (const auto& [w, m] : components) {
    if (w < 0.0) throw NormalizationError("mixture weight must be >= 0");
    wsum += w;
  }
  if (std::fabs(wsum - 1.0) > kMassTol) {
    std::ostringstream os;
    os << "mixture weights sum to " << wsum;
    throw NormalizationError(os.str());
  }
  const SpaceTag space = components.front().second.space();
  const int alphabet = components.front().second.alphabet_size();
  std::vector<Atom> atoms;
  std::vector<std::pair<double, Density>> densities;
  for (const auto& [w, m] : components) {
    if (m.space() != space ||
        (space == SpaceTag::Categorical && m.alphabet_size() != alphabet))
      throw SpaceMismatch("mix components live on different spaces");
    if (w == 0.0) continue;
    for (const auto& a : m.atoms()) atoms.push_back({a.point, w * a.weight});
    for (const auto& [dw, d] : m.densities()) densities.emplace_back(w * dw, d);
  }
  return Measure::from_parts(space, alphabet, std::move(atoms),
                             std::move(densities));
}

Measure mix(std::initializer_list<std::pair<double, Measure>> components) {
  return mix(std::span<const std::pair<double, Measure>>(
      components.begin(), components.size()));
}

}  // namespace predictive
