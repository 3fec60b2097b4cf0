#include "predictive/event.hpp"

#include <algorithm>
#include <sstream>

#include "predictive/errors.hpp"

namespace predictive {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// True when a and b overlap or touch in a way that makes their union a
// single interval.
bool mergeable(const Interval& a, const Interval& b) {
  if (b.lo > a.hi) return false;
  if (b.lo == a.hi) return a.hi_closed || b.lo_closed;
  return true;
}

}  // namespace

Event Event::cat_subset(int alphabet_size, const std::vector<int>& members) {
  Event e;
  e.space_ = SpaceTag::Categorical;
  e.mask_.assign(alphabet_size, 0);
  for (int m : members) {
    if (m < 0 || m >= alphabet_size)
      throw ParamError("event member outside alphabet");
    e.mask_[m] = 1;
  }
  return e;
}

Event Event::cat_mask(std::vector<char> mask) {
  Event e;
  e.space_ = SpaceTag::Categorical;
  e.mask_ = std::move(mask);
  return e;
}

Event Event::cat_full(int alphabet_size) {
  Event e;
  e.space_ = SpaceTag::Categorical;
  e.mask_.assign(alphabet_size, 1);
  return e;
}

Event Event::interval(double lo, double hi, bool lo_closed, bool hi_closed) {
  return real_union({Interval{lo, hi, lo_closed && std::isfinite(lo),
                              hi_closed && std::isfinite(hi)}});
}

Event Event::real_union(std::vector<Interval> parts) {
  Event e;
  e.space_ = SpaceTag::Real;
  std::erase_if(parts, [](const Interval& iv) { return iv.empty(); });
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.lo_closed && !b.lo_closed;
  });
  for (const auto& iv : parts) {
    if (!e.intervals_.empty() && mergeable(e.intervals_.back(), iv)) {
      Interval& last = e.intervals_.back();
      if (iv.hi > last.hi) {
        last.hi = iv.hi;
        last.hi_closed = iv.hi_closed;
      } else if (iv.hi == last.hi) {
        last.hi_closed = last.hi_closed || iv.hi_closed;
      }
    } else {
      e.intervals_.push_back(iv);
    }
  }
  return e;
}

Event Event::real_full() { return real_union({Interval{}}); }

bool Event::contains(const Observation& x) const {
  if (x.space() != space_) throw SpaceMismatch("event/observation space mismatch");
  if (space_ == SpaceTag::Categorical) {
    int i = x.cat_index();
    return i < static_cast<int>(mask_.size()) && mask_[i];
  }
  return contains_real(x.real_value());
}

bool Event::contains_real(double x) const {
  if (space_ != SpaceTag::Real) throw SpaceMismatch("not a real event");
  for (const auto& iv : intervals_)
    if (iv.contains(x)) return true;
  return false;
}

bool Event::empty() const {
  if (space_ == SpaceTag::Categorical)
    return std::none_of(mask_.begin(), mask_.end(), [](char c) { return c; });
  return intervals_.empty();
}

Event Event::complement() const {
  if (space_ == SpaceTag::Categorical) {
    std::vector<char> m(mask_);
    for (auto& c : m) c = !c;
    return cat_mask(std::move(m));
  }
  std::vector<Interval> out;
  double cur = -kInf;
  bool cur_closed = false;
  for (const auto& iv : intervals_) {
    Interval gap{cur, iv.lo, cur_closed, !iv.lo_closed && std::isfinite(iv.lo)};
    if (!gap.empty()) out.push_back(gap);
    cur = iv.hi;
    cur_closed = !iv.hi_closed && std::isfinite(iv.hi);
  }
  Interval tail{cur, kInf, cur_closed, false};
  if (!tail.empty()) out.push_back(tail);
  Event e;
  e.space_ = SpaceTag::Real;
  e.intervals_ = std::move(out);
  return e;
}

Event Event::intersect(const Event& other) const {
  if (other.space_ != space_) throw SpaceMismatch("event space mismatch");
  if (space_ == SpaceTag::Categorical) {
    if (other.mask_.size() != mask_.size())
      throw SpaceMismatch("alphabet size mismatch");
    std::vector<char> m(mask_.size());
    for (size_t i = 0; i < m.size(); ++i) m[i] = mask_[i] && other.mask_[i];
    return cat_mask(std::move(m));
  }
  std::vector<Interval> out;
  for (const auto& a : intervals_) {
    for (const auto& b : other.intervals_) {
      Interval iv;
      if (a.lo > b.lo) {
        iv.lo = a.lo;
        iv.lo_closed = a.lo_closed;
      } else if (a.lo < b.lo) {
        iv.lo = b.lo;
        iv.lo_closed = b.lo_closed;
      } else {
        iv.lo = a.lo;
        iv.lo_closed = a.lo_closed && b.lo_closed;
      }
      if (a.hi < b.hi) {
        iv.hi = a.hi;
        iv.hi_closed = a.hi_closed;
      } else if (a.hi > b.hi) {
        iv.hi = b.hi;
        iv.hi_closed = b.hi_closed;
      } else {
        iv.hi = a.hi;
        iv.hi_closed = a.hi_closed && b.hi_closed;
      }
      if (!iv.empty()) out.push_back(iv);
    }
  }
  Event e;
  e.space_ = SpaceTag::Real;
  e.intervals_ = std::move(out);
  return e;
}

std::string Event::describe() const {
  std::ostringstream os;
  if (space_ == SpaceTag::Categorical) {
    os << "{";
    bool first = true;
    for (size_t i = 0; i < mask_.size(); ++i)
      if (mask_[i]) {
        if (!first) os << ",";
        os << i;
        first = false;
      }
    os << "}";
  } else {
    if (intervals_.empty()) os << "{}";
    for (const auto& iv : intervals_) {
      os << (iv.lo_closed ? "[" : "(") << iv.lo << "," << iv.hi
         << (iv.hi_closed ? "]" : ")");
    }
  }
  return os.str();
}

}  // namespace predictive
