#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

namespace predictive {

// Shape-preserving cubic Hermite interpolant (Fritsch-Carlson slopes).
// Monotone data yields a monotone interpolant, which is what the CDF grids
// need; general data is interpolated without overshoot past local extrema.
class Pchip {
 public:
  Pchip() = default;
  Pchip(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    assert(x_.size() == y_.size() && x_.size() >= 2);
    const size_t n = x_.size();
    d_.assign(n, 0.0);
    std::vector<double> h(n - 1), s(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      s[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    for (size_t i = 1; i + 1 < n; ++i) {
      if (s[i - 1] == 0.0 || s[i] == 0.0 || (s[i - 1] > 0) != (s[i] > 0)) {
        d_[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        d_[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
      }
    }
    d_[0] = edge_slope(h[0], n > 2 ? h[1] : h[0], s[0], n > 2 ? s[1] : s[0]);
    d_[n - 1] = edge_slope(h[n - 2], n > 2 ? h[n - 3] : h[n - 2], s[n - 2],
                           n > 2 ? s[n - 3] : s[n - 2]);
  }

  double operator()(double x) const {
    const size_t i = cell(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
  }

  double derivative(double x) const {
    const size_t i = cell(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double dh00 = (6 * t2 - 6 * t) / h;
    const double dh10 = 3 * t2 - 4 * t + 1;
    const double dh01 = (-6 * t2 + 6 * t) / h;
    const double dh11 = 3 * t2 - 2 * t;
    return dh00 * y_[i] + dh10 * d_[i] + dh01 * y_[i + 1] + dh11 * d_[i + 1];
  }

  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }
  double y_front() const { return y_.front(); }
  double y_back() const { return y_.back(); }

 private:
  static double edge_slope(double h0, double h1, double s0, double s1) {
    double d = ((2 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if ((d > 0) != (s0 > 0) && s0 != 0.0) d = 0.0;
    else if (s0 != 0.0 && (s0 > 0) != (s1 > 0) && std::fabs(d) > 3 * std::fabs(s0))
      d = 3 * s0;
    return d;
  }

  size_t cell(double x) const {
    if (x <= x_.front()) return 0;
    if (x >= x_.back()) return x_.size() - 2;
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    return static_cast<size_t>(it - x_.begin()) - 1;
  }

  std::vector<double> x_, y_, d_;
};

}  // namespace predictive
