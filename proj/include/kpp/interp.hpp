#pragma once

#include <cstddef>
#include <vector>

namespace kpp {

/// Shape-preserving monotone cubic interpolant (Fritsch-Carlson slopes with
/// one-sided three-point end rules). Monotone data produce a monotone curve.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  /// x must be strictly increasing and the same length as y (>= 2 points).
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  std::size_t size() const { return x_.size(); }

 private:
  std::size_t interval(double x) const;
  std::vector<double> x_, y_, d_;  // nodes, values, node derivatives
};

/// Piecewise-linear interpolation of tabulated (x, y) at xq. x must be
/// strictly increasing; xq is clamped to the table range.
double lerp_table(const std::vector<double>& x, const std::vector<double>& y, double xq);

/// Abscissa where piecewise-linear data first crosses `level` going upward:
/// smallest x with y(x) = level given y[i-1] < level <= y[i]. Returns NaN when
/// no upward crossing exists.
double first_upcrossing(const std::vector<double>& x, const std::vector<double>& y, double level);

}  // namespace kpp
