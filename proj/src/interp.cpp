#include "kpp/interp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace kpp {

namespace {

// One-sided three-point end-slope rule with the usual monotonicity clamps.
double edge_slope(double h0, double h1, double m0, double m1) {
  double d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
  if (d * m0 <= 0.0) {
    d = 0.0;
  } else if (m0 * m1 < 0.0 && std::abs(d) > 3.0 * std::abs(m0)) {
    d = 3.0 * m0;
  }
  return d;
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw std::invalid_argument("MonotoneCubic: need >= 2 nodes and matching lengths");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) {
      throw std::invalid_argument("MonotoneCubic: abscissae must be strictly increasing");
    }
  }
  std::vector<double> h(n - 1), m(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    m[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  d_.assign(n, 0.0);
  if (n == 2) {
    d_[0] = d_[1] = m[0];
    return;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (m[i - 1] * m[i] <= 0.0) {
      d_[i] = 0.0;
    } else {
      // Weighted harmonic mean of the adjacent secant slopes.
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / m[i - 1] + w2 / m[i]);
    }
  }
  d_[0] = edge_slope(h[0], h[1], m[0], m[1]);
  d_[n - 1] = edge_slope(h[n - 2], h[n - 3], m[n - 2], m[n - 3]);
}

std::size_t MonotoneCubic::interval(double x) const {
  // Index i such that x is evaluated on [x_[i], x_[i+1]]; clamps outside the range.
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - x_.begin());
  if (i == 0) return 0;
  if (i >= x_.size()) return x_.size() - 2;
  return i - 1;
}

double MonotoneCubic::operator()(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  const double dh00 = (6.0 * t2 - 6.0 * t) / h;
  const double dh10 = 3.0 * t2 - 4.0 * t + 1.0;
  const double dh01 = (-6.0 * t2 + 6.0 * t) / h;
  const double dh11 = 3.0 * t2 - 2.0 * t;
  return dh00 * y_[i] + dh10 * d_[i] + dh01 * y_[i + 1] + dh11 * d_[i + 1];
}

double lerp_table(const std::vector<double>& x, const std::vector<double>& y, double xq) {
  if (x.size() < 2 || x.size() != y.size()) {
    throw std::invalid_argument("lerp_table: need >= 2 nodes and matching lengths");
  }
  if (xq <= x.front()) return y.front();
  if (xq >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), xq);
  const std::size_t i = static_cast<std::size_t>(it - x.begin());
  const double w = (xq - x[i - 1]) / (x[i] - x[i - 1]);
  return (1.0 - w) * y[i - 1] + w * y[i];
}

double first_upcrossing(const std::vector<double>& x, const std::vector<double>& y,
                        double level) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("first_upcrossing: need >= 2 nodes and matching lengths");
  }
  if (y.front() >= level) return x.front();
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (y[i] >= level) {
      const double w = (level - y[i - 1]) / (y[i] - y[i - 1]);
      return x[i - 1] + w * (x[i] - x[i - 1]);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace kpp
