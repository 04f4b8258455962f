#include "kpp/phaseplane.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "kpp/errors.hpp"
#include "kpp/numerics.hpp"

namespace kpp {

namespace {

constexpr long kMaxShootSteps = 10'000'000;

bool is_minimal_speed(const Reaction& r, double c) {
  return std::abs(c - r.c0()) <= 1e-9 * std::max(1.0, r.c0());
}

void check_speed(const Reaction& r, double c, const char* who) {
  if (!std::isfinite(r.c0())) {
    throw std::domain_error(std::string(who) + ": reaction has no positive slope at 0");
  }
  if (c < r.c0() - 1e-12 * std::max(1.0, r.c0())) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s: speed %.17g below the minimal speed %.17g", who, c,
                  r.c0());
    throw std::domain_error(buf);
  }
}

}  // namespace

Eigenvalues eigenvalues(const Reaction& r, double c) {
  if (!std::isfinite(r.fp0()) || !std::isfinite(r.fp1())) {
    throw std::domain_error("eigenvalues: reaction slopes at the rest states are not finite");
  }
  Eigenvalues ev;
  const double disc0 = c * c - 4.0 * r.fp0();
  if (disc0 >= -1e-12 * std::max(1.0, c * c)) {
    const double s0 = std::sqrt(std::max(0.0, disc0));
    ev.lam0_minus = 0.5 * (c - s0);
    ev.lam0_plus = 0.5 * (c + s0);
  } else {
    // Complex pair: the zero state is no longer a node, so no real decay rates exist.
    ev.lam0_minus = std::numeric_limits<double>::quiet_NaN();
    ev.lam0_plus = std::numeric_limits<double>::quiet_NaN();
    ev.lam0_real = false;
    ev.classification = (c == 0.0) ? "center" : "focus";
  }
  const double s1 = std::sqrt(c * c - 4.0 * r.fp1());  // fp1 < 0 keeps this real
  ev.lam1_minus = 0.5 * (c - s1);
  ev.lam1_plus = 0.5 * (c + s1);
  return ev;
}

double bc_constant(const Reaction& r, double c) {
  check_speed(r, c, "bc_constant");
  const double s0 = std::sqrt(std::max(0.0, c * c - 4.0 * r.fp0()));
  return 2.0 * c / (c + s0);
}

double WaveProfile::operator()(double zq) const {
  if (zq < z_lo) {
    if (minimal_speed) {
      // phi ~ K |z| e^{mu z}, matched to the leftmost data point.
      return phi_lo * (-zq) / (-z_lo) * std::exp(mu * (zq - z_lo));
    }
    return phi_lo * std::exp(lam_c * (zq - z_lo));
  }
  if (zq > z_hi) {
    return 1.0 - (1.0 - phi_hi) * std::exp(lam1_minus * (zq - z_hi));
  }
  return (*spline)(zq);
}

double WaveProfile::derivative(double zq) const {
  if (zq < z_lo) {
    if (minimal_speed) {
      const double k = phi_lo / (-z_lo) * std::exp(mu * (zq - z_lo));
      return k * (mu * (-zq) - 1.0);
    }
    return lam_c * phi_lo * std::exp(lam_c * (zq - z_lo));
  }
  if (zq > z_hi) {
    return -lam1_minus * (1.0 - phi_hi) * std::exp(lam1_minus * (zq - z_hi));
  }
  return spline->derivative(zq);
}

WaveProfile wave(const Reaction& r, double c, const WaveOptions& opt) {
  check_speed(r, c, "wave");
  if (opt.nz < 8 || opt.h <= 0.0 || opt.eps <= 0.0 || opt.tail_floor <= 0.0 ||
      opt.z_span <= 0.0) {
    throw std::invalid_argument("wave: bad options");
  }
  const Eigenvalues ev = eigenvalues(r, c);

  // Start just off the saturated state along its stable eigenvector.
  const double nrm = std::sqrt(1.0 + ev.lam1_minus * ev.lam1_minus);
  const double q0 = 1.0 - opt.eps / nrm;
  const double p0 = -opt.eps * ev.lam1_minus / nrm;

  const auto rhs = [&r, c](double q, double p, double& dq, double& dp) {
    dq = p;
    dp = c * p - r.f(q);
  };
  const auto rk4 = [&rhs](double& q, double& p, double h) {
    double k1q, k1p, k2q, k2p, k3q, k3p, k4q, k4p;
    rhs(q, p, k1q, k1p);
    rhs(q + 0.5 * h * k1q, p + 0.5 * h * k1p, k2q, k2p);
    rhs(q + 0.5 * h * k2q, p + 0.5 * h * k2p, k3q, k3p);
    rhs(q + h * k3q, p + h * k3p, k4q, k4p);
    q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  };

  // Backward sweep (decreasing z) until the profile drops below the floor.
  // Only this direction is integrated: it moves away from the saddle at the
  // saturated state, so it is numerically stable, whereas marching into the
  // saddle would amplify the O(eps^2) off-manifold error exponentially. To
  // the right of the seed the profile is pure linearization (1 - phi <= eps),
  // which the evaluator's analytic tail extension reproduces to O(eps^2).
  std::vector<double> zb, qb;
  {
    double q = q0, p = p0, zeta = 0.0;
    long steps = 0;
    while (q > opt.tail_floor) {
      rk4(q, p, -opt.h);
      zeta -= opt.h;
      if (q > 1.0 + 1e-9 || p < -1e-12) {
        throw ShootingFailureError(
            "wave: orbit left the monotone strip (speed below minimal, or eps too large)");
      }
      zb.push_back(zeta);
      qb.push_back(q);
      if (++steps > kMaxShootSteps) {
        throw ShootingFailureError("wave: tail floor unreachable in the backward sweep");
      }
    }
  }

  // Assemble ascending node arrays: reversed backward part plus the seed point.
  std::vector<double> zn, qn;
  zn.reserve(zb.size() + 1);
  qn.reserve(zn.capacity());
  for (std::size_t i = zb.size(); i-- > 0;) {
    zn.push_back(zb[i]);
    qn.push_back(qb[i]);
  }
  zn.push_back(0.0);
  qn.push_back(q0);

  for (std::size_t i = 1; i < qn.size(); ++i) {
    if (!(qn[i] > qn[i - 1])) {
      throw ShootingFailureError("wave: non-monotone profile from shooting");
    }
  }

  // Locate the half level on a provisional interpolant and recenter the nodes.
  double shift;
  {
    const MonotoneCubic provisional(zn, qn);
    const auto it = std::lower_bound(qn.begin(), qn.end(), 0.5);
    if (it == qn.begin() || it == qn.end()) {
      throw ShootingFailureError("wave: half level not bracketed");
    }
    const std::size_t hi = static_cast<std::size_t>(it - qn.begin());
    double a = zn[hi - 1], b = zn[hi];
    for (int k = 0; k < 200 && (b - a) > 1e-15; ++k) {
      const double mid = 0.5 * (a + b);
      (provisional(mid) < 0.5 ? a : b) = mid;
    }
    shift = 0.5 * (a + b);
  }
  for (double& zi : zn) zi -= shift;

  WaveProfile w;
  w.c = c;
  w.lam_c = ev.lam0_minus;
  w.lam1_minus = ev.lam1_minus;
  w.minimal_speed = is_minimal_speed(r, c);
  w.mu = r.mu();
  w.z_lo = zn.front();
  w.z_hi = zn.back();
  w.phi_lo = qn.front();
  w.phi_hi = qn.back();
  w.spline = std::make_shared<const MonotoneCubic>(std::move(zn), std::move(qn));

  // Emit a uniform grid clipped to the data range.
  const double a = std::max(-opt.z_span, w.z_lo);
  const double b = std::min(opt.z_span, w.z_hi);
  if (!(b > a)) throw ShootingFailureError("wave: empty emission window");
  w.z.resize(static_cast<std::size_t>(opt.nz) + 1);
  w.phi.resize(w.z.size());
  for (std::size_t i = 0; i < w.z.size(); ++i) {
    const double zi = a + (b - a) * static_cast<double>(i) / opt.nz;
    w.z[i] = zi;
    w.phi[i] = (*w.spline)(zi);
  }
  for (std::size_t i = 1; i < w.phi.size(); ++i) {
    if (!(w.phi[i] > w.phi[i - 1])) {
      throw ShootingFailureError("wave: emitted profile lost strict monotonicity");
    }
  }
  return w;
}

TailFit tail_fit(const WaveProfile& w, double phi_lo, double phi_hi) {
  if (!(0.0 < phi_lo && phi_lo < phi_hi && phi_hi < 0.5)) {
    throw std::invalid_argument("tail_fit: need 0 < phi_lo < phi_hi < 1/2");
  }
  if (w.phi.front() > phi_lo) {
    throw TailTooShortError(
        "tail_fit: emitted profile does not reach the lower fit level; widen z_span or lower "
        "tail_floor");
  }
  std::vector<double> zs, logs, logs_env;
  for (std::size_t i = 0; i < w.z.size(); ++i) {
    const double p = w.phi[i];
    if (p < phi_lo) continue;
    if (p > phi_hi) break;
    zs.push_back(w.z[i]);
    logs.push_back(std::log(p));
    logs_env.push_back(w.z[i] < -1e-9 ? std::log(p) - std::log(-w.z[i])
                                      : std::numeric_limits<double>::quiet_NaN());
  }
  if (zs.size() < 10) {
    throw TailTooShortError("tail_fit: fewer than 10 samples inside the fit window");
  }
  TailFit fit;
  fit.points = static_cast<int>(zs.size());
  fit.lambda_est = regression_slope(zs.data(), logs.data(), zs.size());
  const bool env_ok =
      std::none_of(logs_env.begin(), logs_env.end(), [](double v) { return std::isnan(v); });
  fit.c0_correction = env_ok ? regression_slope(zs.data(), logs_env.data(), zs.size())
                             : std::numeric_limits<double>::quiet_NaN();
  return fit;
}

double amplitude_above_minimal(const WaveProfile& w) {
  if (w.minimal_speed) {
    throw std::domain_error(
        "amplitude_above_minimal: profile is at the minimal speed; use amplitude_minimal");
  }
  double best = 0.0;
  for (std::size_t i = 0; i < w.z.size() && w.z[i] <= 0.0; ++i) {
    best = std::max(best, w.phi[i] * std::exp(-w.lam_c * w.z[i]));
  }
  // Aitken extrapolation of the ratio along a widely spaced triple near the
  // left end (unit spacing keeps the difference quotient well conditioned).
  const double zl = w.z.front();
  if (zl <= -2.0) {
    const auto ratio = [&w](double z) { return w(z) * std::exp(-w.lam_c * z); };
    const double t0 = ratio(zl + 2.0);
    const double t1 = ratio(zl + 1.0);
    const double t2 = ratio(zl);
    const double den = t2 - 2.0 * t1 + t0;
    const double aitken = std::abs(den) > 1e-18 ? t2 - (t2 - t1) * (t2 - t1) / den : t2;
    if (std::isfinite(aitken)) best = std::max(best, aitken);
  }
  return best;
}

double amplitude_minimal(const WaveProfile& w) {
  if (!w.minimal_speed) {
    throw std::domain_error("amplitude_minimal: profile is not at the minimal speed");
  }
  double best = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < w.z.size() && w.z[i] <= -1.0; ++i) {
    best = std::max(best, w.phi[i] / ((-w.z[i]) * std::exp(w.mu * w.z[i])));
    any = true;
  }
  if (!any) throw TailTooShortError("amplitude_minimal: no emitted samples with z <= -1");
  return best;
}

double profile_residual(const WaveProfile& w, const Reaction& r) {
  const std::size_t n = w.z.size();
  if (n < 3) throw std::invalid_argument("profile_residual: emitted grid too small");
  const double h = w.z[1] - w.z[0];
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d2 = (w.phi[i + 1] - 2.0 * w.phi[i] + w.phi[i - 1]) / (h * h);
    const double d1 = (w.phi[i + 1] - w.phi[i - 1]) / (2.0 * h);
    worst = std::max(worst, std::abs(d2 - w.c * d1 + r.f(w.phi[i])));
  }
  return worst;
}

StationaryProfile stationary(const Reaction& r, double x_max, int nx, double far_tol) {
  if (!(x_max > 0.0) || nx < 16) throw std::invalid_argument("stationary: bad grid");
  const auto mass = [&r](double v) {
    return adaptive_simpson([&r](double u) { return r.f(u); }, v, 1.0, 1e-12);
  };
  StationaryProfile s;
  s.Vp0 = std::sqrt(2.0 * mass(0.0));
  if (!std::isfinite(s.Vp0) || s.Vp0 <= 0.0) {
    throw InvalidReactionError("stationary: reaction mass on [0,1] is not positive");
  }
  const double cap = 1.0 - 0.5 * std::numeric_limits<double>::epsilon();
  const auto slope = [&](double v) {
    if (v >= cap) return 0.0;
    const double m2 = 2.0 * mass(std::min(v, 1.0));
    if (m2 <= 0.0) {
      if (v < 1.0 - 1e-9) {
        throw InvalidReactionError("stationary: reaction mass vanished before the plateau");
      }
      return 0.0;
    }
    return std::sqrt(m2);
  };

  const double dx = x_max / nx;
  const int nsub = std::max(1, static_cast<int>(std::ceil(dx / 5e-3)));
  const double h = dx / nsub;
  s.x.resize(static_cast<std::size_t>(nx) + 1);
  s.V.resize(s.x.size());
  double v = 0.0;
  s.x[0] = 0.0;
  s.V[0] = 0.0;
  for (int i = 1; i <= nx; ++i) {
    for (int k = 0; k < nsub; ++k) v = std::min(rk4_step(slope, v, h), cap);
    s.x[static_cast<std::size_t>(i)] = dx * i;
    s.V[static_cast<std::size_t>(i)] = v;
  }
  if (!(s.V.back() > 1.0 - far_tol)) {
    throw std::domain_error("stationary: x_max too small, plateau not reached");
  }
  return s;
}

}  // namespace kpp
