// Oracle tests for the two eternal-solution constructions: the front-anchored
// comparison pair and its verification rows, the recentered small-data family
// with its detection times, and the level-set diagnostics of the latter.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kpp/entire.hpp"
#include "kpp/errors.hpp"
#include "kpp/halfline_pde.hpp"
#include "kpp/phaseplane.hpp"
#include "kpp/reaction.hpp"

using namespace kpp;

namespace {
const Reaction& logistic() {
  static const Reaction r = Reaction::preset("logistic");
  return r;
}
const StationaryProfile& steady() {
  static const StationaryProfile st = stationary(logistic(), 200.0, 4000);
  return st;
}
}  // namespace

TEST_CASE("initial arches: anchoring, junction smoothness, ordering in n") {
  const int N = choose_N(logistic());
  const double xs = std::sqrt(2.0) * M_PI / logistic().mu();  // junction point
  CHECK(psi_n(logistic(), 8, N, 0.0) == 0.0);
  // C^0/C^1 at the junction, constant plateau 1/(n+N) beyond.
  const double eps = 1e-7;
  CHECK(psi_n(logistic(), 8, N, xs - eps) ==
        doctest::Approx(psi_n(logistic(), 8, N, xs + eps)).epsilon(1e-6));
  CHECK(psi_n(logistic(), 8, N, xs + 3.0) == doctest::Approx(1.0 / 13.0).epsilon(1e-15));
  CHECK(psi_n(logistic(), 8, N, 500.0) == doctest::Approx(1.0 / 13.0).epsilon(1e-15));
  // Larger n sits lower: the family shrinks toward zero initial data.
  for (double x = 0.1; x <= 12.0; x += 0.1) {
    CHECK(psi_n(logistic(), 16, N, x) <= psi_n(logistic(), 8, N, x) + 1e-15);
  }
  // Analytic curvature matches a centered difference inside the arch.
  for (const double x : {0.5, 2.0, 4.0}) {
    const double h = 1e-5;
    const double fd = (psi_n(logistic(), 8, N, x + h) - 2.0 * psi_n(logistic(), 8, N, x) +
                       psi_n(logistic(), 8, N, x - h)) /
                      (h * h);
    CHECK(psi_n_xx(logistic(), 8, N, x) == doctest::Approx(fd).epsilon(1e-4));
  }
  CHECK(psi_n_xx(logistic(), 8, N, xs + 1.0) == 0.0);
  CHECK_THROWS_AS(psi_n(logistic(), 0, N, 1.0), std::invalid_argument);
}

TEST_CASE("plateau index selection across the catalogue") {
  // Smallest N with f' > f'(0)/2 strictly on [0, 1/N]. For the logistic
  // member 1 - 2u > 1/2 fails exactly at u = 1/4 (binary-exact), so N = 5;
  // for the cubic member 1 - 3u^2 > 1/2 holds with margin at u = 1/3, so
  // N = 3. The sine member is endpoint-degenerate: cos(pi/3) = 1/2 exactly,
  // and IEEE rounding of cos(pi/3) lands one ulp above 1/2, so the sampled
  // strict test may legitimately settle on 3 or 4 depending on the platform.
  CHECK(choose_N(Reaction::preset("logistic")) == 5);
  const int n_sine = choose_N(Reaction::preset("sine"));
  CHECK((n_sine == 3 || n_sine == 4));
  CHECK(choose_N(Reaction::preset("cubic")) == 3);
}

TEST_CASE("front-anchored construction above the minimal speed") {
  const WaveProfile w = wave(logistic(), 2.5);
  const Grid g;
  const TypeIRun run = build_type1(logistic(), w, 0.0, -20.0, g);
  CHECK(run.params.c == 2.5);
  CHECK(run.params.lam_c == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(run.params.amplitude == doctest::Approx(1.565953).epsilon(5e-3));
  CHECK_FALSE(run.params.minimal_speed);
  CHECK(run.params.valid_until() == 0.0);
  // The gap bound shrinks backward in time: rho(t) = A e^{c lam t} at theta=0.
  CHECK(run.params.rho(-5.0) < run.params.rho(-1.0));
  CHECK(run.params.rho(-1.0) ==
        doctest::Approx(run.params.amplitude * std::exp(2.5 * 0.5 * -1.0)).epsilon(1e-12));

  // Envelopes order correctly and the lower one is a wall subsolution.
  const Field up = type1_upper(w, run.params, g, -3.0);
  const Field lo = type1_lower(w, run.params, g, -3.0);
  CHECK(lo.u[0] <= 0.0);
  for (int i = 0; i <= g.nx; ++i) CHECK(lo.u[i] <= up.u[i] + 1e-15);

  // Full verification rows, including the late-time drift onto the steady state.
  const VerificationReport rep = verify_type1(logistic(), run, w, steady());
  CHECK(rep.pass());

  // Series columns: the front gap stays under the bound plus the solver floor
  // for t <= 0, and the steady-state distance ends small.
  const TypeISeries se = type1_series(run, w, steady());
  const double tol = solver_tolerance(g);
  for (std::size_t j = 0; j < se.t.size(); ++j) {
    if (se.t[j] <= 0.0) CHECK(se.d_wave[j] <= 1.05 * se.rho[j] + tol);
  }
  CHECK(se.d_V.back() <= 1e-2);   // required budget
  CHECK(se.d_V.back() <= 1e-3);   // measured headroom: ~4e-5
}

TEST_CASE("front-anchored construction at the minimal speed") {
  const WaveProfile w = wave(logistic(), 2.0);
  const Grid g;
  const TypeIRun run = build_type1(logistic(), w, 0.0, -20.0, g);
  CHECK(run.params.minimal_speed);
  CHECK(run.params.delta == doctest::Approx(0.5).epsilon(1e-15));  // f'(0)/2 default
  CHECK(run.params.p == doctest::Approx(1.5).epsilon(1e-15));      // 2 f'(0) - delta
  // rho0 = A (c0/(e delta) + |theta|) at theta = 0, with c0/(e delta) = 4/e.
  CHECK(run.params.rho0 ==
        doctest::Approx(run.params.amplitude * 1.4715177646857693).epsilon(1e-12));
  CHECK(verify_type1(logistic(), run, w, steady()).pass());
}

TEST_CASE("front-anchored construction rejects bad windows") {
  const WaveProfile w = wave(logistic(), 2.5);
  const Grid g;
  // Start time inside the margin of the validity window.
  CHECK_THROWS_AS(build_type1(logistic(), w, 0.0, -0.5, g), std::domain_error);
  TypeIOptions opt;
  opt.delta = 5.0;  // outside (0, 2 f'(0))
  CHECK_THROWS_AS(build_type1(logistic(), wave(logistic(), 2.0), 0.0, -20.0, g, opt),
                  std::domain_error);
}

TEST_CASE("recentered family member: detection time and wall slope") {
  const Grid g;
  const TypeIIRun run = run_type2(logistic(), 8, g, steady());
  CHECK(run.N == 5);
  CHECK(run.m == doctest::Approx(1.0 / 13.0).epsilon(1e-15));
  // Frozen detection oracle for the default grid (cross-checked against an
  // independent method-of-lines integration, which gives 3.3176).
  CHECK(std::abs(run.t_n - 3.3166194915771485) <= 2e-3);
  // Recentering definition: the wall gradient at t_n equals half the steady
  // wall slope 3^{-1/2}/2 = 0.2886751345948129.
  CHECK(run.threshold == doctest::Approx(steady().Vp0 / 2.0).epsilon(1e-15));
  CHECK(std::abs(run.beta00 - 0.2886751345948129) <= 1e-5);
  // The flat flow through the plateau level at the detection time.
  CHECK(std::abs(eta(logistic(), run.m, run.t_n) - 0.696716979) <= 1e-6);

  // Recentered bookkeeping: first snapshot at s = -t_n (absolute time zero),
  // cadence 0.25, coverage past s = +6.
  REQUIRE(!run.traj.snapshots.empty());
  CHECK(run.traj.snapshots.front().t == doctest::Approx(-run.t_n).epsilon(1e-12));
  CHECK(run.traj.snapshots[1].t - run.traj.snapshots[0].t ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK(run.traj.snapshots.back().t >= 6.0 - 0.25);

  CHECK(type2_run_checks(logistic(), run).pass());
}

TEST_CASE("family trends: detection times and plateau levels increase") {
  const Grid g;
  std::vector<TypeIIRun> runs;
  for (const int n : {8, 16, 32, 64}) runs.push_back(run_type2(logistic(), n, g, steady()));
  // Frozen detection-time table on the default grid.
  const double expect[] = {3.3166, 3.8892, 4.5399, 5.2360};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(runs[i].t_n - expect[i]) <= 2e-3);
  for (int i = 1; i < 4; ++i) CHECK(runs[i].t_n > runs[i - 1].t_n + 0.5);
  // eta_{1/(n+N)}(t_n) climbs along the family (doubly-logarithmically).
  const double eta_expect[] = {0.69672, 0.70960, 0.72239, 0.73429};
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(eta(logistic(), runs[i].m, runs[i].t_n) - eta_expect[i]) <= 2e-3);
  }

  const VerificationReport limit = type2_limit(logistic(), runs, steady());
  CHECK(limit.pass());  // advisory window-convergence rows may WARN, not gate
  // Too few runs for a family statement is a failing row, not an exception.
  CHECK_FALSE(type2_limit(logistic(), {runs[0]}, steady()).pass());
}

TEST_CASE("level-set diagnostics of the finest member") {
  const Grid g;
  const TypeIIRun run = run_type2(logistic(), 64, g, steady());
  const LevelSet ls = level_set(run.traj, 0.5);
  REQUIRE(ls.s.size() >= 10);
  CHECK(ls.m == 0.5);
  CHECK(!ls.skipped_s.empty());  // early snapshots cannot resolve the level yet

  // Frozen geometry on the default grid/cadence: the crossing starts at
  // x ~ 4.237 at the earliest resolvable s ~ -0.736 and recedes toward the
  // steady-state crossing near x ~ 0.98.
  CHECK(std::abs(ls.s.front() - (-0.736)) <= 0.05);
  CHECK(std::abs(ls.xi.front() - 4.2372) <= 0.05);
  for (std::size_t k = 1; k < ls.xi.size(); ++k) CHECK(ls.xi[k] < ls.xi[k - 1]);
  for (double v : ls.xi_prime) CHECK(v < 0.0);
  // |xi'| grows backward in time: strictly faster front the further back.
  CHECK(ls.xi_prime.front() < -3.0);
  CHECK(ls.xi_prime.back() > -0.1);
  // Transport identity u_x xi' + u_t = 0 holds to the advection budget.
  const double budget = 5.0 * (g.dx() + 0.25);
  for (double v : ls.residual) CHECK(std::abs(v) <= budget);
  // Front growth rate at the earliest resolvable crossing: u_t ~ f(1/2).
  CHECK(std::abs(ls.ut_front.front() - 0.25) <= 0.025);

  // Recentered windows around earlier and earliest crossings: the sup distance
  // to the flat flow decreases as the anchor recedes.
  const double X = std::min(1.5, ls.xi[2] - 2.0 * g.dx());
  const auto obs = recentered_limit(logistic(), run, ls, {ls.s[2], ls.s[0]}, X, 2.0);
  REQUIRE(obs.size() == 2);
  CHECK(obs[0].s == doctest::Approx(ls.s[2]).epsilon(1e-12));
  CHECK(obs[1].sup_diff < obs[0].sup_diff);
  CHECK(obs[1].sup_diff < 0.2);  // measured ~0.137 at the earliest anchor

  // Bad windows and unmatched anchors are rejected.
  CHECK_THROWS_AS(recentered_limit(logistic(), run, ls, {ls.s[0]}, 50.0, 2.0),
                  std::domain_error);
  CHECK_THROWS_AS(recentered_limit(logistic(), run, ls, {123.0}, X, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(level_set(run.traj, 1.5), std::domain_error);
}

TEST_CASE("family construction guards") {
  const Grid g;
  TypeIIOptions opt;
  opt.t_cap = 0.5;  // far too early for any member to reach the threshold
  CHECK_THROWS_AS(run_type2(logistic(), 8, g, steady(), opt), DetectionTimeoutError);
  TypeIIOptions bad;
  bad.snap_ds = 0.33;  // not an integer multiple of dt = 0.025
  CHECK_THROWS_AS(run_type2(logistic(), 8, g, steady(), bad), ConfigError);
}
