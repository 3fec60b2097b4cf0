#include "predictive/strategy.hpp"

#include <cmath>
#include <limits>

namespace predictive {

double path_log_prob(const Strategy& s, std::span<const Observation> points) {
  double lp = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    const Measure m = s.predictive(points.subspan(0, i));
    const double v = m.chain_value(points[i]);
    if (!(v > 0.0)) return -std::numeric_limits<double>::infinity();
    lp += std::log(v);
  }
  return lp;
}

Path simulate_path(const Strategy& s, int n, Rng& rng) {
  Path p;
  p.points.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Measure m = s.predictive(p.points);
    p.points.push_back(m.sample(rng));
  }
  p.log_prob = path_log_prob(s, p.points);
  return p;
}

std::vector<Observation> to_observations(std::span<const int> symbols) {
  std::vector<Observation> out;
  out.reserve(symbols.size());
  for (int s : symbols) out.push_back(Observation::cat(s));
  return out;
}

}  // namespace predictive
