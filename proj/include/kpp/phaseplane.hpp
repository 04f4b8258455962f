#pragma once

#include <memory>
#include <vector>

#include "kpp/interp.hpp"
#include "kpp/reaction.hpp"

namespace kpp {

/// Linearization rates of the traveling-profile equation phi'' - c phi' + f(phi) = 0.
/// lam0 pair: roots of L^2 - c L + f'(0) = 0 (decay rates at the zero state);
/// lam1 pair: roots of L^2 - c L + f'(1) = 0 (rates at the saturated state).
/// Below the minimal speed the lam0 pair is complex: lam0_real is false, the
/// pair is NaN, and classification says what the zero state has become.
struct Eigenvalues {
  double lam0_minus = 0.0;
  double lam0_plus = 0.0;
  double lam1_minus = 0.0;  // negative: the orbit enters the saturated state along it
  double lam1_plus = 0.0;
  bool lam0_real = true;
  const char* classification = "node";  // "node", "focus" (0 < c < c0), or "center" (c = 0)
};

Eigenvalues eigenvalues(const Reaction& r, double c);

/// Boundary-gradient constant b_c = 2c / (c + sqrt(c^2 - 4 f'(0))), equal to
/// c/lam0_minus; b at the minimal speed is exactly 2. Requires c >= c0.
double bc_constant(const Reaction& r, double c);

/// Monotone front profile phi(z), phi(-inf)=0, phi(+inf)=1, normalized so
/// phi(0) = 1/2. Evaluation outside the computed range switches to the
/// asymptotic forms (pure exponential for c > c0, the |z| e^{mu z} envelope at
/// the minimal speed, exponential saturation on the right).
struct WaveProfile {
  double c = 0.0;
  double lam_c = 0.0;       // decay rate at -inf (lam0_minus)
  double lam1_minus = 0.0;  // approach rate at +inf
  bool minimal_speed = false;
  double mu = 0.0;

  std::vector<double> z;    // emitted uniform grid
  std::vector<double> phi;  // profile values on the emitted grid

  double operator()(double zq) const;
  double derivative(double zq) const;

  // Dense interpolant over the integration nodes plus its data range.
  std::shared_ptr<const MonotoneCubic> spline;
  double z_lo = 0.0, z_hi = 0.0;
  double phi_lo = 0.0, phi_hi = 1.0;
};

struct WaveOptions {
  double z_span = 40.0;       // emitted grid clips to [-z_span, z_span] within the data range
  int nz = 40000;             // emitted intervals (nz+1 points)
  double h = 5e-4;            // fixed integration step of the shooting
  double eps = 1e-8;          // offset along the stable eigenvector at the saturated state
  double tail_floor = 1e-10;  // integrate until phi (left) resp. 1-phi (right) drops below
};

/// Shoot the heteroclinic orbit backward from the saturated state (the
/// saturated side itself is the exact linearized tail, which is accurate to
/// O(eps^2) and avoids integrating into a saddle). Requires c >= c0; throws
/// ShootingFailureError when the orbit leaves the monotone strip (which
/// signals c < c0 or eps too large).
WaveProfile wave(const Reaction& r, double c, const WaveOptions& opt = {});

/// Decay-rate fit over the far-left window phi in [phi_lo, phi_hi]:
/// lambda_est is the least-squares slope of log phi against z, and
/// c0_correction the slope of log phi - log|z| (the minimal-speed form).
struct TailFit {
  double lambda_est = 0.0;
  double c0_correction = 0.0;
  int points = 0;
};
TailFit tail_fit(const WaveProfile& w, double phi_lo = 1e-6, double phi_hi = 1e-3);

/// Tail amplitude A with phi(z) <= A e^{lam_c z} for z <= 0, computed from
/// ratio samples on the emitted grid plus Aitken extrapolation of a widely
/// spaced triple near the left end. Requires c > c0 strictly.
double amplitude_above_minimal(const WaveProfile& w);

/// Envelope amplitude for the minimal-speed tail phi(z) <= A |z| e^{mu z},
/// maximized over emitted samples with z <= -1 (the envelope degenerates at
/// z = 0, so the comparison region is bounded away from it).
double amplitude_minimal(const WaveProfile& w);

/// Max absolute residual of phi'' - c phi' + f(phi) by centered differences on
/// the interior of the emitted grid.
double profile_residual(const WaveProfile& w, const Reaction& r);

/// Wall-anchored steady state V on [0, x_max]: V(0) = 0, V' = sqrt(2 I(V))
/// with I(V) the reaction mass between V and 1; V increases to 1.
struct StationaryProfile {
  std::vector<double> x, V;
  double Vp0 = 0.0;  // exact wall slope sqrt(2 I(0)) from quadrature

  double operator()(double xq) const { return lerp_table(x, V, xq); }
};

/// March the first-order phase-plane ODE with RK4 substeps (target substep
/// 5e-3). Throws when the plateau is not reached by x_max.
StationaryProfile stationary(const Reaction& r, double x_max = 200.0, int nx = 4000,
                             double far_tol = 1e-6);

}  // namespace kpp
