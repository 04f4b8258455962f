#pragma once

#include <limits>
#include <vector>

#include "kpp/halfline_pde.hpp"
#include "kpp/phaseplane.hpp"
#include "kpp/reaction.hpp"
#include "kpp/report.hpp"

namespace kpp {

// ---------------------------------------------------------------------------
// Wave-anchored construction (ancient solutions riding a front from the right)
// ---------------------------------------------------------------------------

/// Parameters of the comparison pair (upper envelope = shifted front, lower
/// envelope = front minus a decaying gap rho). Above the minimal speed
/// rho(t) = A e^{-lam theta} e^{c lam t}; at the minimal speed the gap decays
/// at rate p = 2 f'(0) - delta with prefactor rho0 = A e^{-mu theta}
/// (c0/(e delta) + |theta|), absorbing the |z| envelope factor.
struct TypeIParams {
  double c = 0.0;
  double theta = 0.0;
  double lam_c = 0.0;
  double amplitude = 0.0;  // tail amplitude A of the front envelope
  bool minimal_speed = false;
  double delta = 0.0;  // minimal-speed gap parameter (unused above minimal speed)
  double p = 0.0;      // minimal-speed gap decay rate
  double rho0 = 0.0;   // minimal-speed gap prefactor

  double rho(double t) const;
  /// The comparison pair is valid while the front keeps the wall value
  /// non-positive: t <= theta / c.
  double valid_until() const { return theta / c; }
};

struct TypeIOptions {
  double t_end = 40.0;
  /// Snapshot times; empty selects the default cadence (unit spacing up to 0,
  /// then every 5 time units to t_end).
  std::vector<double> out_times;
  /// Minimal-speed gap parameter in (0, 2 f'(0)); NaN selects f'(0)/2.
  double delta = std::numeric_limits<double>::quiet_NaN();
  /// Required separation between t_start and min(0, theta/c).
  double margin = 1.0;
  /// Sandwich slack multiplier on solver_tolerance for the construction check.
  double guard = 1.0;
};

struct TypeIRun {
  Trajectory traj;
  TypeIParams params;
  double t_start = 0.0;
};

/// Exact envelopes on the grid at time t (lower is not clamped at zero).
Field type1_upper(const WaveProfile& w, const TypeIParams& p, const Grid& g, double t);
Field type1_lower(const WaveProfile& w, const TypeIParams& p, const Grid& g, double t);

/// Start from the clamped lower envelope at t_start and integrate to t_end.
/// Throws ConstructionFailureError if any stored snapshot with t <= theta/c
/// escapes the envelope pair by more than guard * solver_tolerance.
TypeIRun build_type1(const Reaction& r, const WaveProfile& w, double theta, double t_start,
                     const Grid& g, const TypeIOptions& opt = {});

/// Per-snapshot distances used in reports: gap to the shifted front, the
/// analytic gap bound rho, and the distance to the wall-anchored steady state.
struct TypeISeries {
  std::vector<double> t, d_wave, rho, d_V;
};
TypeISeries type1_series(const TypeIRun& run, const WaveProfile& w,
                         const StationaryProfile& V);

/// Assemble the verification rows: sandwich containment, gap-versus-rho with
/// the additive solver floor, wall subsolution sign, decay-rate window, front
/// residual, and late-time relaxation onto the steady state.
VerificationReport verify_type1(const Reaction& r, const TypeIRun& run, const WaveProfile& w,
                                const StationaryProfile& V, double dv_threshold = 1e-2);

// ---------------------------------------------------------------------------
// Wall-anchored construction (recentered small-data family)
// ---------------------------------------------------------------------------

/// Initial profile of the n-th family member: a concave sine-plus-ramp arch up
/// to x = sqrt(2) pi / mu, constant 1/(n+N) beyond; C^2 at the junction.
double psi_n(const Reaction& r, int n, int N, double x);
Field psi_n_field(const Reaction& r, int n, int N, const Grid& g);
/// Analytic second derivative of psi_n (zero beyond the junction).
double psi_n_xx(const Reaction& r, int n, int N, double x);

/// Smallest N >= 1 with f' > mu^2/2 strictly on [0, 1/N] (sampled); this makes
/// every family member initially nondecreasing in time.
int choose_N(const Reaction& r);

struct TypeIIOptions {
  int N = 0;             // 0 = choose_N(r)
  double t_cap = 1000.0;  // detection timeout
  double snap_ds = 0.25;  // snapshot cadence; must be an integer multiple of dt
  double t_after = 6.0;   // keep snapshots this long past the detection time
  double detect_tol = 1e-6;  // bisection tolerance for the crossing time
};

/// One family member, recentered at the time its wall gradient reaches half
/// the steady-state wall slope. Snapshot and series times are re-stamped to
/// s = t - t_n; the absolute time of a snapshot is s + t_n.
struct TypeIIRun {
  int n = 0, N = 0;
  double m = 0.0;          // initial plateau level 1/(n+N)
  double t_n = 0.0;        // detection time
  double beta00 = 0.0;     // wall gradient at t_n
  double threshold = 0.0;  // detection threshold (half the steady wall slope)
  Trajectory traj;         // recentered snapshots every snap_ds, from absolute time 0
};

/// Integrate the n-th member, locate t_n by bisection on the linearly
/// interpolated wall-gradient series, and re-run with the snapshot schedule.
/// Throws DetectionTimeoutError if the gradient never reaches the threshold.
TypeIIRun run_type2(const Reaction& r, int n, const Grid& g, const StationaryProfile& V,
                    const TypeIIOptions& opt = {});

/// Structural rows for one member: derivative signs at snapshots, domination
/// by the flat envelope, far-edge agreement with the flat flow, and initial
/// slope-condition sanity.
VerificationReport type2_run_checks(const Reaction& r, const TypeIIRun& run,
                                    double sign_tol = 1e-8, double domination_tol = 1e-10);

/// Cross-run rows: detection times increasing, plateau growth along the
/// family, wall-slope agreement of the finest run with half the steady slope,
/// and pairwise window differences of recentered solutions (advisory
/// convergence verdict). Fewer than three runs yields a failing
/// "insufficient-data" row.
VerificationReport type2_limit(const Reaction& r, const std::vector<TypeIIRun>& runs,
                               const StationaryProfile& V, double X = 20.0, double T = 2.0);

// ---------------------------------------------------------------------------
// Level-set diagnostics
// ---------------------------------------------------------------------------

struct LevelSetOptions {
  double plateau_margin = 0.02;  // require max u >= m + margin before trusting a crossing
  double edge_margin = 10.0;     // drop crossings within this distance of the far edge
};

/// Leftmost upward crossing of level m for each snapshot, with its speed and
/// the transport-identity residual u_x xi' + u_t evaluated on the crossing.
struct LevelSet {
  double m = 0.0;
  std::vector<double> s, xi, xi_prime, residual, ut_front;
  std::vector<double> skipped_s;  // snapshot times where the level was not resolvable
};
LevelSet level_set(const Trajectory& traj, double m, const LevelSetOptions& opt = {});

/// Window sup-distance between the recentered solution around the crossing at
/// s and the flat flow through level m: sup over |x| <= X (on-grid) and
/// t in [-T, T] (snapshot-aligned) of |U(xi(s) + x, s + t) - eta_m(t)|.
struct RecenteredObservation {
  double s = 0.0;
  double sup_diff = 0.0;
};
std::vector<RecenteredObservation> recentered_limit(const Reaction& r, const TypeIIRun& run,
                                                    const LevelSet& ls,
                                                    const std::vector<double>& s_list, double X,
                                                    double T);

}  // namespace kpp
