#include "predictive/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "predictive/errors.hpp"

namespace predictive {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string point_to_string(const Observation& o, const Alphabet& alphabet) {
  switch (o.space()) {
    case SpaceTag::Categorical: return alphabet.label(o.cat_index());
    case SpaceTag::Real: return format_double(o.real_value());
    case SpaceTag::RealPair:
      return format_double(o.pair_value().x) + ";" +
             format_double(o.pair_value().z);
  }
  return "?";
}

}  // namespace

std::string paths_to_csv(const std::vector<Path>& paths, SpaceTag space,
                         const Alphabet& alphabet) {
  std::ostringstream os;
  size_t n = 0;
  for (const auto& p : paths) n = std::max(n, p.points.size());
  for (size_t i = 1; i <= n; ++i) {
    if (space == SpaceTag::RealPair)
      os << "x" << i << ",z" << i << ",";
    else
      os << "x" << i << ",";
  }
  os << "log_prob,seed\n";
  for (const auto& p : paths) {
    for (const auto& o : p.points) {
      if (space == SpaceTag::RealPair)
        os << format_double(o.pair_value().x) << ","
           << format_double(o.pair_value().z) << ",";
      else
        os << point_to_string(o, alphabet) << ",";
    }
    os << format_double(p.log_prob) << ",";
    if (p.seed) os << *p.seed;
    os << "\n";
  }
  return os.str();
}

json paths_to_json(const std::vector<Path>& paths, SpaceTag space,
                   const Alphabet& alphabet) {
  json out = json::array();
  for (const auto& p : paths) {
    json points = json::array();
    for (const auto& o : p.points) {
      switch (space) {
        case SpaceTag::Categorical:
          points.push_back(alphabet.label(o.cat_index()));
          break;
        case SpaceTag::Real: points.push_back(o.real_value()); break;
        case SpaceTag::RealPair:
          points.push_back({o.pair_value().x, o.pair_value().z});
          break;
      }
    }
    json row{{"points", points}, {"log_prob", p.log_prob}};
    if (p.seed) row["seed"] = *p.seed;
    out.push_back(std::move(row));
  }
  return out;
}

json law_to_json(const PathTable<double>& table, const Alphabet& alphabet) {
  const std::string sep = alphabet.single_char_labels() ? "" : ",";
  json out = json::object();
  std::vector<int> digits;
  for (size_t idx = 0; idx < table.p.size(); ++idx) {
    table.decode(idx, digits);
    std::string key;
    for (size_t i = 0; i < digits.size(); ++i) {
      if (i) key += sep;
      key += alphabet.label(digits[i]);
    }
    out[key] = table.p[idx];
  }
  return out;
}

std::string reports_to_csv(const std::vector<VerificationReport>& reports) {
  std::ostringstream os;
  os << VerificationReport::csv_header() << "\n";
  for (const auto& r : reports) os << r.csv_row() << "\n";
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
}

int distinct_value_count(const Path& p) {
  std::unordered_set<double> reals;
  std::unordered_set<int> cats;
  for (const auto& o : p.points) {
    switch (o.space()) {
      case SpaceTag::Categorical: cats.insert(o.cat_index()); break;
      case SpaceTag::Real: reals.insert(o.real_value()); break;
      case SpaceTag::RealPair: reals.insert(o.pair_value().x); break;
    }
  }
  return static_cast<int>(reals.size() + cats.size());
}

}  // namespace predictive
