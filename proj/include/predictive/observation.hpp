#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "predictive/errors.hpp"

namespace predictive {

enum class SpaceTag { Categorical, Real, RealPair };

inline const char* space_name(SpaceTag s) {
  switch (s) {
    case SpaceTag::Categorical: return "categorical";
    case SpaceTag::Real: return "real";
    case SpaceTag::RealPair: return "real_pair";
  }
  return "?";
}

struct RealPair {
  double x = 0.0;
  double z = 0.0;
  bool operator==(const RealPair&) const = default;
};

// A point of the sample space S: a categorical index, a real value, or a
// real (x, z) pair in the covariate case. Stored reals are always finite.
class Observation {
 public:
  Observation() : value_(0) {}

  static Observation cat(int index) {
    if (index < 0) throw ParamError("categorical index must be >= 0");
    Observation o;
    o.value_ = index;
    return o;
  }
  static Observation real(double x) {
    if (!std::isfinite(x)) throw ParamError("real observation must be finite");
    Observation o;
    o.value_ = x;
    return o;
  }
  static Observation pair(double x, double z) {
    if (!std::isfinite(x) || !std::isfinite(z))
      throw ParamError("pair observation must be finite");
    Observation o;
    o.value_ = RealPair{x, z};
    return o;
  }

  SpaceTag space() const {
    switch (value_.index()) {
      case 0: return SpaceTag::Categorical;
      case 1: return SpaceTag::Real;
      default: return SpaceTag::RealPair;
    }
  }

  int cat_index() const {
    if (space() != SpaceTag::Categorical) throw SpaceMismatch("not categorical");
    return std::get<int>(value_);
  }
  double real_value() const {
    if (space() != SpaceTag::Real) throw SpaceMismatch("not real");
    return std::get<double>(value_);
  }
  const RealPair& pair_value() const {
    if (space() != SpaceTag::RealPair) throw SpaceMismatch("not a real pair");
    return std::get<RealPair>(value_);
  }

  // Exact equality; reals compare bit-for-bit (NaN is excluded by invariant).
  bool operator==(const Observation&) const = default;

 private:
  std::variant<int, double, RealPair> value_;
};

// Finite alphabet of a categorical space, with optional display labels.
struct Alphabet {
  int size = 0;
  std::vector<std::string> labels;  // empty => "0", "1", ...

  std::string label(int i) const {
    if (i >= 0 && i < static_cast<int>(labels.size())) return labels[i];
    return std::to_string(i);
  }
  bool single_char_labels() const {
    if (labels.empty()) return size <= 10;
    for (const auto& l : labels)
      if (l.size() != 1) return false;
    return true;
  }
};

}  // namespace predictive
