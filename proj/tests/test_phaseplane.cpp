// Oracle tests for the phase-plane module: eigenvalue closed forms, the
// wall-coefficient identity, shooting-built front profiles against an exact
// solution, tail fits, and the steady wall-anchored profile.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "kpp/phaseplane.hpp"
#include "kpp/reaction.hpp"

using namespace kpp;

namespace {
const Reaction& logistic() {
  static const Reaction r = Reaction::preset("logistic");
  return r;
}
}  // namespace

TEST_CASE("eigenvalues at c=2.5 match the quadratic roots exactly") {
  // lam0 solves lam^2 - c lam + f'(0) = 0: disc = 6.25 - 4 = 2.25, sqrt = 1.5.
  const Eigenvalues ev = eigenvalues(logistic(), 2.5);
  CHECK(ev.lam0_real);
  CHECK(std::string(ev.classification) == "node");
  CHECK(ev.lam0_minus == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ev.lam0_plus == doctest::Approx(2.0).epsilon(1e-15));
  // lam1 solves lam^2 - c lam + f'(1) = 0 with f'(1) = -1: sqrt(10.25).
  CHECK(ev.lam1_minus == doctest::Approx(-0.35078105935821213).epsilon(1e-14));
  CHECK(ev.lam1_plus == doctest::Approx(2.850781059358212).epsilon(1e-14));
}

TEST_CASE("minimal speed gives the degenerate double root") {
  const Eigenvalues ev = eigenvalues(logistic(), 2.0);
  CHECK(ev.lam0_real);
  CHECK(ev.lam0_minus == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ev.lam0_plus == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("subcritical speeds are flagged, not fatal") {
  const Eigenvalues focus = eigenvalues(logistic(), 1.0);
  CHECK_FALSE(focus.lam0_real);
  CHECK(std::isnan(focus.lam0_minus));
  CHECK(std::string(focus.classification) == "focus");
  CHECK(std::isfinite(focus.lam1_minus));  // the saddle pair stays real

  const Eigenvalues center = eigenvalues(logistic(), 0.0);
  CHECK_FALSE(center.lam0_real);
  CHECK(std::string(center.classification) == "center");
}

TEST_CASE("wall coefficient: exact anchors and the defining identity") {
  // b_c = 2c / (c + sqrt(c^2 - 4 f'(0))).
  CHECK(bc_constant(logistic(), 2.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(bc_constant(logistic(), 2.5) == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(bc_constant(logistic(), 100.0) - 1.0 ==
        doctest::Approx(0.00010002000500142216).epsilon(1e-9));
  // c lam_c = f'(0) b_c links the tail rate to the wall coefficient.
  for (const double c : {2.0, 2.25, 3.0, 7.5}) {
    const double lam_c = eigenvalues(logistic(), c).lam0_minus;
    CHECK(c * lam_c == doctest::Approx(logistic().fp0() * bc_constant(logistic(), c))
                           .epsilon(1e-12));
  }
  CHECK_THROWS_AS(bc_constant(logistic(), 1.0), std::domain_error);
}

TEST_CASE("front profile at c=2.5: centering, monotonicity, residual, tail") {
  const WaveProfile w = wave(logistic(), 2.5);
  CHECK_FALSE(w.minimal_speed);
  CHECK(w.lam_c == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(w(0.0) == doctest::Approx(0.5).epsilon(1e-9));
  // The profile rises from 0 (z -> -inf) to 1 (z -> +inf), strictly.
  for (std::size_t i = 1; i < w.phi.size(); ++i) CHECK(w.phi[i] > w.phi[i - 1]);
  CHECK(profile_residual(w, logistic()) <= 1e-6);
  // Evaluation beyond the stored span uses the analytic tails.
  CHECK(w(-60.0) < 1e-10);
  CHECK(1.0 - w(60.0) < 1e-8);  // saturated-side rate |lam1^-| ~ 0.35 is slower
  CHECK(w.derivative(0.0) > 0.0);

  // Tail decay rate from a log-linear fit over phi in [1e-6, 1e-3].
  const TailFit tf = tail_fit(w);
  CHECK(tf.lambda_est == doctest::Approx(0.5).epsilon(0.02));

  // Tail amplitude: phi(z) <= A e^{lam_c z} with the frozen measured constant.
  const double a_c = amplitude_above_minimal(w);
  CHECK(a_c == doctest::Approx(1.565953).epsilon(5e-3));
  for (double z = -30.0; z <= 0.0; z += 0.5) {
    CHECK(w(z) <= a_c * std::exp(w.lam_c * z) * (1.0 + 1e-9));
  }
}

TEST_CASE("minimal-speed front carries the linear-in-|z| tail correction") {
  const WaveProfile w = wave(logistic(), 2.0);
  CHECK(w.minimal_speed);
  CHECK(w.lam_c == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(w(0.0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(profile_residual(w, logistic()) <= 1e-6);
  // phi ~ A |z| e^{z} as z -> -inf: the corrected fit recovers exponent 1.
  const TailFit tf = tail_fit(w);
  CHECK(tf.lambda_est == doctest::Approx(1.0).epsilon(0.05));
  CHECK(tf.c0_correction == doctest::Approx(0.977165).epsilon(5e-3));
  CHECK(amplitude_minimal(w) == doctest::Approx(3.134396).epsilon(5e-3));
}

TEST_CASE("closed-form front at c=5/sqrt(6) is reproduced to high accuracy") {
  // (1 + (sqrt(2)-1) e^{-z/sqrt(6)})^{-2} solves the profile equation for the
  // logistic member at this one speed; it is an independent end-to-end oracle
  // for the shooting + re-gridding pipeline.
  const double c = 2.041241452319315;  // 5/sqrt(6)
  const WaveProfile w = wave(logistic(), c);
  const double k = std::sqrt(2.0) - 1.0;
  double worst = 0.0;
  for (double z = -20.0; z <= 20.0; z += 0.01) {
    const double exact = std::pow(1.0 + k * std::exp(-z / std::sqrt(6.0)), -2.0);
    worst = std::max(worst, std::abs(w(z) - exact));
  }
  CHECK(worst <= 1e-4);          // required budget
  CHECK(worst <= 1e-9);          // measured headroom: ~1e-12
  // lam_c = (c - sqrt(c^2-4))/2 = 2/sqrt(6); the tail amplitude has the
  // closed form (sqrt(2)+1)^2.
  CHECK(w.lam_c == doctest::Approx(2.0 / std::sqrt(6.0)).epsilon(1e-12));
  CHECK(amplitude_above_minimal(w) == doctest::Approx(5.82842712474619).epsilon(1e-3));
}

TEST_CASE("front construction rejects subcritical speeds") {
  CHECK_THROWS_AS(wave(logistic(), 1.5), std::domain_error);
}

TEST_CASE("steady wall-anchored profile: exact slope, shape, and consistency") {
  const StationaryProfile st = stationary(logistic(), 200.0, 4000);
  // V'(0) = sqrt(2 F(1)) with F(1) = integral of f over [0,1] = 1/6.
  CHECK(st.Vp0 == doctest::Approx(0.5773502691896258).epsilon(1e-12));
  CHECK(st.x.size() == st.V.size());
  CHECK(st.V.front() == 0.0);
  CHECK(1.0 - st.V.back() <= 1e-6);
  for (std::size_t i = 1; i < st.V.size(); ++i) CHECK(st.V[i] >= st.V[i - 1]);

  // At the mid level the orbit identity gives V' = sqrt(2 (F(1)-F(1/2)))
  //   = sqrt(1/6) for the logistic member.
  const double dx = st.x[1] - st.x[0];
  std::size_t j = 1;
  while (j + 2 < st.V.size() && st.V[j + 1] < 0.5) ++j;
  const double frac = (0.5 - st.V[j]) / (st.V[j + 1] - st.V[j]);
  const double sj = (st.V[j + 1] - st.V[j - 1]) / (2.0 * dx);
  const double sj1 = (st.V[j + 2] - st.V[j]) / (2.0 * dx);
  const double slope_mid = sj * (1.0 - frac) + sj1 * frac;
  CHECK(slope_mid == doctest::Approx(0.408248290463863).epsilon(1e-4));
}

TEST_CASE("steady profile rejects under-resolved grids") {
  CHECK_THROWS_AS(stationary(logistic(), 200.0, 8), std::invalid_argument);
}
