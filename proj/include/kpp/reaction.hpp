#pragma once

#include <string>
#include <vector>

#include "kpp/report.hpp"

namespace kpp {

/// Reaction nonlinearity for the scalar equation u_t = u_xx + f(u).
///
/// The canonical profile is monostable on [0,1]: f(0) = f(1) = 0, f > 0 in
/// between, f'(1) < 0 < f'(0), and f'(u) <= f'(0) throughout. Below zero the
/// reaction is extended linearly with slope f'(0) so comparison arguments that
/// subtract a positive perturbation stay well defined.
class Reaction {
 public:
  /// Construct a named preset. Accepted specs:
  ///   "logistic"   u(1-u)                (default model problem)
  ///   "cubic"      u(1-u^2)
  ///   "sine"       sin(pi u)/pi
  ///   "skewed"     u(1-u)(1+2u)          (violates the slope bound; negative control)
  ///   "inverted"   u(u-1)                (violates positivity; negative control)
  ///   "linear"     k u, with "linear:<k>" selecting the slope (default 1)
  static Reaction preset(const std::string& spec);

  double f(double u) const;    // reaction term including the linear extension below 0
  double df(double u) const;   // derivative of f (extension-aware)
  /// Second derivative: analytic for every preset except where noted, with a
  /// centered finite difference (h = 1e-5) as the generic fallback.
  double d2f(double u) const;
  bool has_analytic_d2f() const { return analytic_d2f_; }

  const std::string& name() const { return name_; }
  std::string spec() const;  // canonical spec string, round-trips through preset()

  double fp0() const { return fp0_; }  // f'(0)
  double fp1() const { return fp1_; }  // f'(1)
  /// sqrt(f'(0)); the linearization rate at the unstable state. NaN when f'(0) <= 0.
  double mu() const { return mu_; }
  /// Minimal front speed 2*sqrt(f'(0)) of the pulled front family.
  double c0() const { return c0_; }

 private:
  enum class Kind { Logistic, Cubic, Sine, Skewed, Inverted, Linear };
  Reaction(Kind kind, double k);
  double f_raw(double u) const;
  double df_raw(double u) const;

  Kind kind_;
  double k_ = 1.0;  // slope of the linear preset
  std::string name_;
  double fp0_ = 0.0, fp1_ = 0.0, mu_ = 0.0, c0_ = 0.0;
  bool analytic_d2f_ = true;
};

/// Check the monostable profile on a uniform sample of [0,1]: endpoint zeros,
/// endpoint slopes, strict interior positivity, and the slope bound
/// f'(u) <= f'(0). Throws InvalidReactionError on non-finite evaluations.
VerificationReport validate_kpp(const Reaction& r, int samples = 10000, double tol = 1e-9);

/// Check concavity f''(u) <= 0 on a uniform sample of [0,1].
VerificationReport validate_concavity(const Reaction& r, int samples = 10000, double tol = 1e-9);

/// Spatially flat solution: value at time t (either sign) of y' = f(y) with
/// y(0) = m, integrated adaptively to relative tolerance rtol. Requires
/// 0 < m < 1.
double eta(const Reaction& r, double m, double t, double rtol = 1e-10);

/// eta at several times (ascending not required; each evaluated independently
/// in a forward/backward sweep from 0 so shared segments are reused).
std::vector<double> eta_series(const Reaction& r, double m, const std::vector<double>& ts,
                               double rtol = 1e-10);

}  // namespace kpp
