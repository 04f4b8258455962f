#include "kpp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <vector>

#include "kpp/entire.hpp"
#include "kpp/errors.hpp"
#include "kpp/halfline_pde.hpp"
#include "kpp/interp.hpp"
#include "kpp/numerics.hpp"
#include "kpp/phaseplane.hpp"

namespace kpp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string label(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

/// Uniform double in [0,1) from the top 53 bits, identical on every platform
/// (std::uniform_real_distribution is implementation-defined).
double unit_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Nondecreasing profile in [0, scale] with a pinned wall value: normalized
/// running sum of squared uniforms.
std::vector<double> random_ordered_profile(std::mt19937_64& gen, int nx, double scale) {
  std::vector<double> u(nx + 1, 0.0);
  double acc = 0.0;
  for (int i = 1; i <= nx; ++i) {
    const double r = unit_uniform(gen);
    acc += r * r;
    u[i] = acc;
  }
  if (acc > 0.0) {
    for (double& v : u) v *= scale / acc;
  }
  return u;
}

void add_wave_rows(VerificationReport& rep, const Reaction& r, const WaveProfile& w,
                   const std::string& tag) {
  rep.add_le(tag + "/front-residual", profile_residual(w, r), 1e-6);
  rep.add_le(tag + "/centering", std::abs(w(0.0) - 0.5), 1e-9);
  double min_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < w.phi.size(); ++i) min_step = std::min(min_step, w.phi[i] - w.phi[i - 1]);
  rep.add(tag + "/strictly-monotone", min_step, 0.0, min_step > 0.0, "min increment between emitted nodes");
  const double range = std::max(-w.phi.front(), w.phi.back() - 1.0);
  rep.add_le(tag + "/range", range, 0.0, "excess outside [0,1]");
}

}  // namespace

VerificationReport suite_profiles(const Reaction& r) {
  VerificationReport rep("profiles:" + r.spec());
  const double fp0 = r.fp0();
  const double c0 = r.c0();

  // Eigenvalue pair identities over a speed grid: product f'(0), sum c.
  const double factors[] = {1.0, 1.1, 1.5, 2.0, 4.0, 10.0};
  double worst_prod = 0.0, worst_sum = 0.0, worst_ident = 0.0;
  for (double f : factors) {
    const double c = f * c0;
    const auto ev = eigenvalues(r, c);
    worst_prod = std::max(worst_prod, std::abs(ev.lam0_minus * ev.lam0_plus - fp0));
    worst_sum = std::max(worst_sum, std::abs(ev.lam0_minus + ev.lam0_plus - c));
    worst_ident = std::max(worst_ident, std::abs(c * ev.lam0_minus - fp0 * bc_constant(r, c)));
  }
  rep.add_le("rates/pair-product", worst_prod, 1e-12 * std::max(1.0, fp0));
  rep.add_le("rates/pair-sum", worst_sum, 1e-12 * std::max(1.0, 10.0 * c0));
  rep.add_le("rates/wall-coefficient-identity", worst_ident, 1e-12 * std::max(1.0, fp0),
             "c*lam = f'(0)*b across the speed grid");

  const auto sub = eigenvalues(r, 0.5 * c0);
  const auto ctr = eigenvalues(r, 0.0);
  const bool flagged = !sub.lam0_real && std::string(sub.classification) == "focus" &&
                       !ctr.lam0_real && std::string(ctr.classification) == "center";
  rep.add("rates/subcritical-flagged", flagged ? 1.0 : 0.0, 1.0, flagged,
          "complex pair below the minimal speed is reported, not computed");

  rep.add_le("rates/wall-coefficient-at-minimal", std::abs(bc_constant(r, c0) - 2.0), 1e-12);
  double prev = bc_constant(r, c0);
  double worst_increase = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 200; ++i) {
    const double c = c0 + (10.0 * c0 - c0) * i / 200.0;
    const double b = bc_constant(r, c);
    worst_increase = std::max(worst_increase, b - prev);
    prev = b;
  }
  rep.add("rates/wall-coefficient-decreasing", worst_increase, 0.0, worst_increase < 0.0,
          "max increment over [c0, 10 c0]");
  const double c_big = std::max(100.0, 10.0 * c0);
  rep.add_le("rates/wall-coefficient-large-speed", std::abs(bc_constant(r, c_big) - 1.0), 1e-3,
             label("b at c=%g tends to 1", c_big));

  // Fronts at and above the minimal speed.
  const WaveProfile w_min = wave(r, c0);
  const WaveProfile w_up = wave(r, 1.25 * c0);
  add_wave_rows(rep, r, w_min, "front-minimal");
  add_wave_rows(rep, r, w_up, label("front-c=%g", 1.25 * c0));

  const TailFit fit_up = tail_fit(w_up);
  const double lam_ref = eigenvalues(r, 1.25 * c0).lam0_minus;
  rep.add_le("tail/decay-rate-fit", std::abs(fit_up.lambda_est / lam_ref - 1.0), 0.02,
             label("fitted decay vs slow rate %.6g, relative", lam_ref));
  const TailFit fit_min = tail_fit(w_min);
  rep.add_le("tail/minimal-decay-correction", std::abs(fit_min.c0_correction - 1.0), 0.05,
             "algebraic-factor exponent at the minimal speed");

  const double a_up = amplitude_above_minimal(w_up);
  rep.add("tail/amplitude-finite", a_up, 0.0, std::isfinite(a_up) && a_up > 1.0,
          "envelope constant above the minimal speed exceeds 1");
  const double a_min = amplitude_minimal(w_min);
  rep.add("tail/amplitude-minimal-finite", a_min, 0.0, std::isfinite(a_min) && a_min > 1.0,
          "envelope constant of the |z| e^{mu z} form");

  if (r.spec() == "logistic") {
    // The quadratic reaction admits an explicit front at c = 5/sqrt(6).
    const double c_af = 5.0 / std::sqrt(6.0);
    const WaveProfile w_af = wave(r, c_af);
    double worst = 0.0;
    const double k = std::sqrt(2.0) - 1.0;
    for (std::size_t i = 0; i < w_af.z.size(); ++i) {
      const double e = 1.0 + k * std::exp(-w_af.z[i] / std::sqrt(6.0));
      worst = std::max(worst, std::abs(w_af.phi[i] - 1.0 / (e * e)));
    }
    rep.add_le("closed-form/profile", worst, 1e-4, "explicit quadratic-reaction front");
    const double a_af = amplitude_above_minimal(w_af);
    const double a_exact = (std::sqrt(2.0) + 1.0) * (std::sqrt(2.0) + 1.0);
    rep.add_le("closed-form/amplitude", std::abs(a_af - a_exact), 1e-3,
               label("exact envelope constant %.6g", a_exact));
  }

  // Steady profile on the default window plus a fine window for consistency.
  const StationaryProfile st = stationary(r);
  double min_dv = std::numeric_limits<double>::infinity();
  double worst_convex = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < st.V.size(); ++i) {
    min_dv = std::min(min_dv, st.V[i] - st.V[i - 1]);
    if (i + 1 < st.V.size()) {
      worst_convex = std::max(worst_convex, st.V[i + 1] - 2.0 * st.V[i] + st.V[i - 1]);
    }
  }
  rep.add("steady/monotone", min_dv, 0.0, min_dv >= 0.0, "min increment");
  rep.add_le("steady/concave", worst_convex, 1e-6, "max centered second difference");
  rep.add_le("steady/far-field", 1.0 - st.V.back(), 1e-6);

  const StationaryProfile fine = stationary(r, 20.0, 100000);
  const MonotoneCubic vs(fine.x, fine.V);
  double worst_pp = 0.0;
  for (int i = 1; i < 1000; ++i) {
    const double x = 20.0 * i / 1000.0;
    const double v = vs(x);
    if (v > 1.0 - 1e-9) break;
    const double mass = adaptive_simpson([&r](double u) { return r.f(u); }, v, 1.0, 1e-13);
    const double vp = vs.derivative(x);
    worst_pp = std::max(worst_pp, std::abs(vp * vp - 2.0 * mass));
  }
  rep.add_le("steady/orbit-consistency", worst_pp, 1e-8,
             "(V')^2 - 2 * integral of f from V to 1, fine grid");
  const double x_half = first_upcrossing(fine.x, fine.V, 0.5);
  const double slope_half = vs.derivative(x_half);
  const double slope_ref =
      std::sqrt(2.0 * adaptive_simpson([&r](double u) { return r.f(u); }, 0.5, 1.0, 1e-13));
  rep.add_le("steady/mid-level-slope", std::abs(slope_half - slope_ref), 1e-6,
             label("quadrature value %.9g", slope_ref));

  if (r.spec() == "logistic") {
    rep.add_le("steady/wall-slope-closed-form", std::abs(st.Vp0 - 1.0 / std::sqrt(3.0)), 1e-9,
               "exact wall slope 3^{-1/2}");
  }
  return rep;
}

VerificationReport suite_solver(const Reaction& r, std::uint64_t seed) {
  VerificationReport rep("solver:" + r.spec());
  const Grid g;  // defaults: L=200, nx=4000, dt=0.025
  const double tol = solver_tolerance(g);
  const double eps1 = 0.01;
  const double rate = r.fp0();

  // Exact linear solution from constant data with a pinned wall.
  {
    const Reaction lin = Reaction::preset("linear:" + label("%.17g", rate));
    Field u0{0.0, std::vector<double>(g.nx + 1, eps1)};
    u0.u[0] = 0.0;
    const Trajectory tr = solve(lin, g, u0, 1.0, {1.0});
    const Field w = oracle_w(g, eps1, rate, 1.0);
    double worst = 0.0;
    for (int i = 0; i <= g.nx; ++i) worst = std::max(worst, std::abs(tr.snapshots[0].u[i] - w.u[i]));
    rep.add_le("linear/wall-anchored-linf", worst, 1e-3, "constant data, t=1");
    const double beta = tr.series.beta.back();
    const double beta_ref = oracle_w_wall(eps1, rate, 1.0);
    rep.add_le("linear/wall-flux", std::abs(beta / beta_ref - 1.0), 0.01,
               label("exact flux %.9g, relative", beta_ref));
  }

  // Exact linear solution away from the wall, started from a slice at t0.
  {
    const double b = 0.995, X1 = 20.0, t0 = 0.05;
    const Reaction lin = Reaction::preset("linear:" + label("%.17g", b));
    Field u0 = oracle_v(g, eps1, b, X1, t0);
    const Trajectory tr = solve(lin, g, u0, 1.0, {1.0});
    const Field v = oracle_v(g, eps1, b, X1, 1.0);
    double worst = 0.0;
    const int i1 = static_cast<int>(std::ceil(X1 / g.dx() - 1e-9));
    for (int i = i1; i <= g.nx; ++i) worst = std::max(worst, std::abs(tr.snapshots[0].u[i] - v.u[i]));
    rep.add_le("linear/interior-linf", worst, 1e-3, "compared beyond the shift point only");
  }

  // Seeded ordered pairs: ordering and range preservation to t=5.
  {
    std::mt19937_64 gen(seed);
    double worst_order = -std::numeric_limits<double>::infinity();
    double worst_range = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 100; ++trial) {
      const double s1 = 0.2 + 0.8 * unit_uniform(gen);
      const double s2 = 0.2 + 0.8 * unit_uniform(gen);
      std::vector<double> a = random_ordered_profile(gen, g.nx, s1);
      std::vector<double> b = random_ordered_profile(gen, g.nx, s2);
      Field lo{0.0, {}}, hi{0.0, {}};
      lo.u.resize(g.nx + 1);
      hi.u.resize(g.nx + 1);
      for (int i = 0; i <= g.nx; ++i) {
        lo.u[i] = std::min(a[i], b[i]);
        hi.u[i] = std::max(a[i], b[i]);
      }
      SolveOptions opt;
      opt.on_step = [&worst_range](long, const std::vector<double>& u) {
        for (double v : u) {
          worst_range = std::max(worst_range, std::max(-v, v - 1.0));
        }
      };
      const Trajectory tlo = solve(r, g, lo, 5.0, {5.0}, opt);
      const Trajectory thi = solve(r, g, hi, 5.0, {5.0}, opt);
      for (int i = 0; i <= g.nx; ++i) {
        worst_order = std::max(worst_order, tlo.snapshots[0].u[i] - thi.snapshots[0].u[i]);
      }
    }
    rep.add_le("pairs/ordering-preserved", worst_order, tol,
               "max lower-over-upper excess at t=5, 100 seeded pairs");
    rep.add_le("pairs/range-invariance", worst_range, tol,
               "max excursion outside [0,1] over every step");
  }

  // Self-convergence on smooth arch data under joint grid halving.
  {
    const double L = 60.0;
    const int N = choose_N(r);
    std::vector<Field> finals;
    std::vector<int> nxs = {600, 1200, 2400};
    std::vector<double> dts = {0.05, 0.025, 0.0125};
    for (int k = 0; k < 3; ++k) {
      Grid gk{L, nxs[k], dts[k]};
      const Field u0 = psi_n_field(r, 1, N, gk);
      finals.push_back(solve(r, gk, u0, 1.0, {1.0}).snapshots[0]);
    }
    const auto diff_on_coarse = [&](const Field& coarse, const Field& fger, int stride) {
      double worst = 0.0;
      for (std::size_t i = 0; i < coarse.u.size(); ++i) {
        worst = std::max(worst, std::abs(coarse.u[i] - fger.u[i * stride]));
      }
      return worst;
    };
    const double e1 = diff_on_coarse(finals[0], finals[1], 2);
    const double e2 = diff_on_coarse(finals[1], finals[2], 2);
    const double order = (e2 > 0.0) ? std::log2(e1 / e2) : kNaN;
    rep.add("order/self-convergence", order, 1.9, std::isfinite(order) && order >= 1.9,
            label("coarse-pair gap %.3g", e1) + label(", fine-pair gap %.3g", e2));
  }

  // Stationarity of the steady profile under stepping, and its grid response.
  {
    const auto drift = [&r](const Grid& gk) {
      const StationaryProfile st = stationary(r, gk.L, gk.nx);
      Field u0{0.0, st.V};
      const Trajectory tr = solve(r, gk, u0, 1.0, {1.0});
      double worst = 0.0;
      for (std::size_t i = 0; i < st.V.size(); ++i) {
        worst = std::max(worst, std::abs(tr.snapshots[0].u[i] - st.V[i]));
      }
      return worst;
    };
    const double d1 = drift(g);
    const double d2 = drift(Grid{g.L, 2 * g.nx, 0.5 * g.dt});
    rep.add_le("steady/step-drift", d1, tol, "after 1 time unit on the default grid");
    const double ratio = (d2 > 0.0) ? d1 / d2 : kNaN;
    rep.add("steady/step-drift-halving", ratio, 3.5, std::isfinite(ratio) && ratio >= 3.5,
            label("halved-grid drift %.3g", d2));
  }

  // Structural fixed points and exact discrete derivatives.
  {
    Field z0{0.0, std::vector<double>(g.nx + 1, 0.0)};
    const Trajectory tr = solve(r, g, z0, 1.0, {1.0});
    double worst = 0.0;
    for (double v : tr.snapshots[0].u) worst = std::max(worst, std::abs(v));
    rep.add_le("fixed/zero-data", worst, 0.0, "the rest state is preserved bit-exactly");
  }
  {
    std::vector<Field> snaps;
    for (int k = 0; k < 3; ++k) {
      Field f{static_cast<double>(k), std::vector<double>(g.nx + 1)};
      for (int i = 0; i <= g.nx; ++i) f.u[i] = g.dx() * i;
      snaps.push_back(std::move(f));
    }
    const auto ders = discrete_derivatives(snaps, g.dx());
    double worst = 0.0;
    for (const auto& d : ders) {
      for (double v : d.ux) worst = std::max(worst, std::abs(v - 1.0));
      for (double v : d.uxx) worst = std::max(worst, std::abs(v));
      for (double v : d.ut) worst = std::max(worst, std::abs(v));
    }
    rep.add_le("fixed/ramp-derivatives", worst, 1e-9,
               "linear ramp reproduces u_x=1, u_xx=0, u_t=0 up to stencil roundoff");
  }
  {
    const int N = choose_N(r);
    const double mu2h = 0.5 * r.fp0();
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 2000; ++i) {
      const double x = g.L * i / 2000.0;
      worst = std::min(worst, psi_n_xx(r, 1, N, x) + mu2h * psi_n(r, 1, N, x));
    }
    rep.add("fixed/arch-identity", worst, -1e-9, worst >= -1e-9,
            "psi'' + (f'(0)/2) psi stays nonnegative");
  }

  // The linear flow with the full slope dominates the nonlinear flow.
  {
    Field u0{0.0, std::vector<double>(g.nx + 1, eps1)};
    u0.u[0] = 0.0;
    double worst_settled = -std::numeric_limits<double>::infinity();
    double worst_transient = -std::numeric_limits<double>::infinity();
    SolveOptions opt;
    opt.on_step = [&](long k, const std::vector<double>& u) {
      const double t = g.dt * static_cast<double>(k);
      if (t <= 0.0 || t > 1.0 + 1e-12) return;
      const Field w = oracle_w(g, eps1, rate, t);
      double worst = -std::numeric_limits<double>::infinity();
      for (int i = 0; i <= g.nx; ++i) worst = std::max(worst, u[i] - w.u[i]);
      double& slot = (t >= 0.5) ? worst_settled : worst_transient;
      slot = std::max(slot, worst);
    };
    solve(r, g, u0, 1.0, {}, opt);
    rep.add_le("domination/settled", worst_settled, 1e-12,
               "nonlinear flow under the linear envelope, t in [0.5, 1]");
    rep.add_le("domination/transient", worst_transient, 2e-3,
               "startup transient window t in (0, 0.5)");
  }
  return rep;
}

VerificationReport suite_type1(const Reaction& r) {
  VerificationReport rep("type1:" + r.spec());
  const Grid g;
  const StationaryProfile V = stationary(r, g.L, g.nx);

  const auto run_speed = [&](double c, const std::string& tag) {
    try {
      const WaveProfile w = wave(r, c);
      const TypeIRun run = build_type1(r, w, /*theta=*/0.0, /*t_start=*/-20.0, g);
      rep.merge(verify_type1(r, run, w, V), tag);
    } catch (const std::exception& e) {
      rep.add(tag + "/raised", kNaN, 0.0, false, e.what());
    }
  };
  run_speed(1.25 * r.c0(), label("c=%g", 1.25 * r.c0()));
  run_speed(r.c0(), "minimal");
  return rep;
}

VerificationReport suite_type2(const Reaction& r) {
  VerificationReport rep("type2:" + r.spec());
  const Grid g;
  const StationaryProfile V = stationary(r, g.L, g.nx);

  std::vector<TypeIIRun> runs;
  for (int n : {8, 16, 32, 64}) {
    try {
      runs.push_back(run_type2(r, n, g, V));
      rep.merge(type2_run_checks(r, runs.back()), label("n=%g", n));
    } catch (const std::exception& e) {
      rep.add(label("n=%g", n) + "/raised", kNaN, 0.0, false, e.what());
    }
  }
  rep.merge(type2_limit(r, runs, V), "family");

  if (!runs.empty()) {
    const TypeIIRun& finest = runs.back();
    try {
      const LevelSet ls = level_set(finest.traj, 0.5);
      rep.add("level/crossings-found", static_cast<double>(ls.s.size()), 10.0, ls.s.size() >= 10,
              "resolvable mid-level crossings");
      double worst_res = 0.0;
      for (double v : ls.residual) worst_res = std::max(worst_res, std::abs(v));
      const double ds = finest.traj.snapshots.size() > 1
                            ? finest.traj.snapshots[1].t - finest.traj.snapshots[0].t
                            : 0.25;
      rep.add_le("level/transport-identity", worst_res, 5.0 * (g.dx() + ds),
                 "u_x xi' + u_t on the crossing");
      const double ref = r.f(0.5);
      rep.add_le("level/front-growth-rate", std::abs(ls.ut_front.front() - ref), 0.1 * ref,
                 label("u_t at the earliest resolvable crossing vs f(1/2)=%.6g", ref));

      // The crossing recedes (and accelerates) backward in time.
      double worst_xi_rise = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 1; k < ls.xi.size(); ++k) {
        worst_xi_rise = std::max(worst_xi_rise, ls.xi[k] - ls.xi[k - 1]);
      }
      rep.add_le("level/crossing-receding-backward", worst_xi_rise, 1e-6,
                 "max forward increment of xi: the crossing must move toward the wall");
      double worst_speed = -std::numeric_limits<double>::infinity();
      for (double v : ls.xi_prime) worst_speed = std::max(worst_speed, v);
      rep.add_le("level/crossing-speed-negative", worst_speed, 1e-6);
      rep.add("level/crossing-speed-growing-backward", ls.xi_prime.front(), ls.xi_prime.back(),
              ls.xi_prime.front() < ls.xi_prime.back(),
              "|xi'| largest at the earliest resolvable time");

      // Recentered window around the three earliest resolvable crossings,
      // listed with the anchor receding; the window must stay off the wall.
      if (ls.s.size() >= 5) {
        const std::vector<double> anchors = {ls.s[4], ls.s[2], ls.s[0]};
        const double X = std::min(1.5, ls.xi[4] - 2.0 * g.dx());
        const auto obs = recentered_limit(r, finest, ls, anchors, X, /*T=*/2.0);
        double worst_inc = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < obs.size(); ++i) {
          worst_inc = std::max(worst_inc, obs[i].sup_diff - obs[i - 1].sup_diff);
        }
        rep.add("level/recentered-trend", worst_inc, 0.0, worst_inc <= 0.0,
                "window sup-distance to the flat flow shrinks as the anchor recedes");
        rep.add_le("level/recentered-sup", obs.back().sup_diff, 0.05,
                   label("window sup at the earliest anchor s=%g", obs.back().s),
                   /*mandatory=*/false);
        // |U(xi(s), s) - m| at the anchors: exact up to interpolation arithmetic.
        double worst_anchor = 0.0;
        for (std::size_t k : {std::size_t{0}, std::size_t{2}, std::size_t{4}}) {
          for (const Field& f : finest.traj.snapshots) {
            if (std::abs(f.t - ls.s[k]) > 1e-9) continue;
            std::vector<double> xg(f.u.size());
            for (std::size_t i = 0; i < xg.size(); ++i) xg[i] = g.dx() * static_cast<double>(i);
            worst_anchor = std::max(worst_anchor, std::abs(lerp_table(xg, f.u, ls.xi[k]) - 0.5));
          }
        }
        rep.add_le("level/anchor-exact", worst_anchor, 1e-8,
                   "interpolated solution equals the level at its own crossing");
      }
    } catch (const std::exception& e) {
      rep.add("level/raised", kNaN, 0.0, false, e.what());
    }
  }
  return rep;
}

VerificationReport run_all(const Reaction& r, std::uint64_t seed) {
  VerificationReport rep("all:" + r.spec());
  rep.merge(suite_profiles(r), "profiles");
  rep.merge(suite_solver(r, seed), "solver");
  rep.merge(suite_type1(r), "type1");
  rep.merge(suite_type2(r), "type2");
  return rep;
}

VerificationReport run_suite(const std::string& name, const Reaction& r, std::uint64_t seed) {
  try {
    if (name == "profiles") return suite_profiles(r);
    if (name == "solver") return suite_solver(r, seed);
    if (name == "type1") return suite_type1(r);
    if (name == "type2") return suite_type2(r);
    if (name == "all") return run_all(r, seed);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    VerificationReport rep(name + ":" + r.spec());
    rep.add("raised", kNaN, 0.0, false, e.what());
    return rep;
  }
  throw ConfigError("unknown suite: " + name);
}

}  // namespace kpp
