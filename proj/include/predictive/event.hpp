#pragma once

#include <limits>
#include <string>
#include <vector>

#include "predictive/observation.hpp"

namespace predictive {

// Real interval with explicit endpoint inclusion. Infinite endpoints are
// always treated as open.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;

  bool contains(double x) const {
    if (x < lo || (x == lo && !lo_closed)) return false;
    if (x > hi || (x == hi && !hi_closed)) return false;
    return true;
  }
  bool empty() const {
    return lo > hi || (lo == hi && !(lo_closed && hi_closed));
  }
};

// Measurable event: a subset of a finite alphabet, or a finite union of
// disjoint real intervals. Supports the set algebra needed by kernels
// (complement, intersection) and by prob/condition.
class Event {
 public:
  static Event cat_subset(int alphabet_size, const std::vector<int>& members);
  static Event cat_mask(std::vector<char> mask);
  static Event cat_full(int alphabet_size);
  static Event interval(double lo, double hi, bool lo_closed = true,
                        bool hi_closed = true);
  static Event real_union(std::vector<Interval> parts);  // normalizes
  static Event real_full();

  SpaceTag space() const { return space_; }
  bool contains(const Observation& x) const;
  bool contains_real(double x) const;
  bool empty() const;

  Event complement() const;
  Event intersect(const Event& other) const;

  const std::vector<char>& mask() const { return mask_; }
  const std::vector<Interval>& intervals() const { return intervals_; }
  int alphabet_size() const { return static_cast<int>(mask_.size()); }

  std::string describe() const;

 private:
  SpaceTag space_ = SpaceTag::Categorical;
  std::vector<char> mask_;           // categorical
  std::vector<Interval> intervals_;  // real: sorted, pairwise disjoint
};

}  // namespace predictive
