#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "kpp/reaction.hpp"

namespace kpp {

/// Uniform spatial grid on [0, L] with nx intervals (nx+1 nodes) and fixed
/// time step dt. The left end carries the absorbing (zero-value) condition,
/// the right end a reflecting (zero-flux) one standing in for infinity.
struct Grid {
  double L = 200.0;
  int nx = 4000;
  double dt = 0.025;

  double dx() const { return L / nx; }
  /// Throws ConfigError unless L > 0, nx >= 64, 0 < dt <= dx (the accuracy
  /// envelope the verification tolerances are calibrated for).
  void validate() const;
};

/// Additive tolerance floor used when comparing fields computed by the
/// scheme against exact envelopes: dx^2 + dt^2.
double solver_tolerance(const Grid& g);

/// One spatial field at a fixed time.
struct Field {
  double t = 0.0;
  std::vector<double> u;
};

/// Per-step boundary diagnostics: time, wall gradient, far-edge value.
struct StepSeries {
  std::vector<double> t, beta, kappa;
};

/// Result of an initial-value run: interpolated snapshots at requested output
/// times plus the per-step diagnostic series (which includes the initial state).
struct Trajectory {
  Grid grid;
  std::vector<Field> snapshots;
  StepSeries series;
  long steps = 0;     // steps actually taken
  double t_base = 0.0;  // state time at absolute step index 0
};

/// Strang-split stepper: half reaction (explicit midpoint), full diffusion
/// (trapezoidal in time, tridiagonal solve in space), half reaction. The first
/// `startup_steps` steps of a trajectory replace the trapezoidal diffusion
/// with two implicit halves, which damps the checkerboard transients that
/// rough initial data would otherwise ring on. Startup is keyed to the
/// absolute step index, so resumed runs never re-apply it.
class Solver {
 public:
  Solver(const Reaction& r, const Grid& g);

  /// Advance the field one step; k is the absolute step index being taken.
  /// Throws BlowUpError if a non-finite value appears.
  void advance(std::vector<double>& u, long k);

  /// Second-order one-sided wall gradient (node 0 is pinned to zero).
  double wall_gradient(const std::vector<double>& u) const;

  const Grid& grid() const { return g_; }
  int startup_steps = 2;

 private:
  void react_half(std::vector<double>& u) const;
  void solve_tridiagonal(std::vector<double>& d);
  void diffuse_trapezoidal(std::vector<double>& u);
  void diffuse_implicit_half(std::vector<double>& u);

  Reaction r_;
  Grid g_;
  double a_ = 0.0;               // dt / (2 dx^2)
  std::vector<double> cp_, mi_;  // precomputed Thomas elimination coefficients
  std::vector<double> work_;
};

/// One plain scheme step (no startup damping) of a single field.
Field step(const Reaction& r, const Grid& g, const Field& u0);

struct SolveOptions {
  int startup_steps = 2;
  long first_step_index = 0;  // absolute index of the supplied state (resume support)
  /// State time at absolute index 0. NaN means "u0.t is the trajectory start";
  /// resumed runs pass the original start so the time base is bit-identical.
  double t_base = std::numeric_limits<double>::quiet_NaN();
  /// Called after every completed step with the absolute index and state.
  std::function<void(long k, const std::vector<double>& u)> on_step;
};

/// Integrate from u0 to t_end, emitting linear-in-time interpolated snapshots
/// at the requested output times (each must lie in [u0.t, t_end]).
Trajectory solve(const Reaction& r, const Grid& g, const Field& u0, double t_end,
                 std::vector<double> out_times, const SolveOptions& opt = {});

/// Exact comparison fields for the linear problem u_t = u_xx + rate*u.
/// Wall-anchored: eps1 * exp(rate t) * erf(x / (2 sqrt(t))); requires t > 0.
Field oracle_w(const Grid& g, double eps1, double rate, double t);
/// Its exact wall gradient eps1 * exp(rate t) / sqrt(pi t).
double oracle_w_wall(double eps1, double rate, double t);
/// Shifted free-space kernel: (eps1/2) exp(rate t) erf((x - X1)/(2 sqrt(t))).
Field oracle_v(const Grid& g, double eps1, double rate, double X1, double t);

/// Finite-difference derivatives of a snapshot sequence: second-order centered
/// stencils inside (one-sided second order for space, one-sided first order
/// for time at the sequence ends).
struct FieldDerivatives {
  std::vector<double> ut, ux, uxx;
};
std::vector<FieldDerivatives> discrete_derivatives(const std::vector<Field>& snaps, double dx);

}  // namespace kpp
