#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace kpp {

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-13) {
  struct Impl {
    F& f;
    int depth_limit = 60;
    double simpson(double x0, double x2, double f0, double f1, double f2) const {
      return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2);
    }
    double rec(double x0, double x2, double f0, double f1, double f2, double whole, double tol,
               int depth) const {
      const double xm = 0.5 * (x0 + x2);
      const double xl = 0.5 * (x0 + xm);
      const double xr = 0.5 * (xm + x2);
      const double fl = f(xl);
      const double fr = f(xr);
      const double left = simpson(x0, xm, f0, fl, f1);
      const double right = simpson(xm, x2, f1, fr, f2);
      const double err = left + right - whole;
      if (depth >= depth_limit || std::abs(err) <= 15.0 * tol) {
        return left + right + err / 15.0;
      }
      return rec(x0, xm, f0, fl, f1, left, 0.5 * tol, depth + 1) +
             rec(xm, x2, f1, fr, f2, right, 0.5 * tol, depth + 1);
    }
  };
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fm = f(0.5 * (a + b));
  const double fb = f(b);
  Impl impl{f};
  const double whole = impl.simpson(a, b, fa, fm, fb);
  return impl.rec(a, b, fa, fm, fb, whole, tol, 0);
}

/// One classical RK4 step for a scalar autonomous ODE y' = g(y).
template <class G>
double rk4_step(G&& g, double y, double h) {
  const double k1 = g(y);
  const double k2 = g(y + 0.5 * h * k1);
  const double k3 = g(y + 0.5 * h * k2);
  const double k4 = g(y + h * k3);
  return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Adaptive Dormand-Prince 5(4) integration of the scalar autonomous ODE
/// y' = g(y) from t0 to t1 (either direction). Steps are clamped so the
/// endpoint is hit exactly; the result is y(t1).
template <class G>
double rkdp_solve(G&& g, double y0, double t0, double t1, double rtol = 1e-10,
                  double atol = 1e-13) {
  if (t0 == t1) return y0;
  // Dormand-Prince coefficients (standard 7-stage pair with FSAL).
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                          b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  static constexpr double e1 = 35.0 / 384.0 - 5179.0 / 57600.0,
                          e3 = 500.0 / 1113.0 - 7571.0 / 16695.0,
                          e4 = 125.0 / 192.0 - 393.0 / 640.0,
                          e5 = -2187.0 / 6784.0 + 92097.0 / 339200.0,
                          e6 = 11.0 / 84.0 - 187.0 / 2100.0, e7 = -1.0 / 40.0;

  const double dir = (t1 > t0) ? 1.0 : -1.0;
  double t = t0;
  double y = y0;
  double h = dir * std::min(1e-2, std::abs(t1 - t0));
  double k1 = g(y);
  const int max_steps = 10'000'000;
  for (int it = 0; it < max_steps; ++it) {
    if ((t - t1) * dir >= 0.0) return y;
    if ((t + h - t1) * dir > 0.0) h = t1 - t;  // clamp final step onto the endpoint
    const double k2 = g(y + h * a21 * k1);
    const double k3 = g(y + h * (a31 * k1 + a32 * k2));
    const double k4 = g(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 = g(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 = g(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = g(y5);
    const double err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double sc = atol + rtol * std::max(std::abs(y), std::abs(y5));
    const double ratio = std::abs(err) / sc;
    if (ratio <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;  // FSAL
      if (!std::isfinite(y)) throw std::runtime_error("rkdp_solve: non-finite state");
    }
    const double factor =
        (ratio > 0.0) ? std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0) : 5.0;
    h *= factor;
    if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(t))) {
      throw std::runtime_error("rkdp_solve: step size underflow");
    }
  }
  throw std::runtime_error("rkdp_solve: step budget exhausted");
}

/// Least-squares slope of y against x. Requires at least two points.
inline double regression_slope(const double* x, const double* y, std::size_t n) {
  if (n < 2) throw std::invalid_argument("regression_slope: need at least two points");
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("regression_slope: degenerate abscissae");
  return sxy / sxx;
}

}  // namespace kpp
