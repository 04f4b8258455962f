#include "kpp/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "kpp/errors.hpp"
#include "kpp/numerics.hpp"

namespace kpp {

namespace {

constexpr double kPi = 3.14159265358979323846;

double parse_linear_slope(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return 1.0;
  const std::string tail = spec.substr(colon + 1);
  std::size_t used = 0;
  double k = 0.0;
  try {
    k = std::stod(tail, &used);
  } catch (const std::exception&) {
    throw ConfigError("reaction spec: bad slope in '" + spec + "'");
  }
  if (used != tail.size() || !std::isfinite(k) || k <= 0.0) {
    throw ConfigError("reaction spec: slope must be a positive number in '" + spec + "'");
  }
  return k;
}

}  // namespace

Reaction Reaction::preset(const std::string& spec) {
  const std::string base = spec.substr(0, spec.find(':'));
  if (base == "logistic") return Reaction(Kind::Logistic, 1.0);
  if (base == "cubic") return Reaction(Kind::Cubic, 1.0);
  if (base == "sine") return Reaction(Kind::Sine, 1.0);
  if (base == "skewed") return Reaction(Kind::Skewed, 1.0);
  if (base == "inverted") return Reaction(Kind::Inverted, 1.0);
  if (base == "linear") return Reaction(Kind::Linear, parse_linear_slope(spec));
  throw ConfigError("unknown reaction preset '" + spec + "'");
}

Reaction::Reaction(Kind kind, double k) : kind_(kind), k_(k) {
  switch (kind_) {
    case Kind::Logistic: name_ = "logistic"; break;
    case Kind::Cubic: name_ = "cubic"; break;
    case Kind::Sine: name_ = "sine"; break;
    case Kind::Skewed: name_ = "skewed"; break;
    case Kind::Inverted: name_ = "inverted"; break;
    case Kind::Linear: name_ = "linear"; break;
  }
  fp0_ = df_raw(0.0);
  fp1_ = df_raw(1.0);
  mu_ = fp0_ > 0.0 ? std::sqrt(fp0_) : std::numeric_limits<double>::quiet_NaN();
  c0_ = 2.0 * mu_;
}

std::string Reaction::spec() const {
  if (kind_ == Kind::Linear && k_ != 1.0) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "linear:%.17g", k_);
    return buf;
  }
  return name_;
}

double Reaction::f_raw(double u) const {
  switch (kind_) {
    case Kind::Logistic: return u * (1.0 - u);
    case Kind::Cubic: return u * (1.0 - u * u);
    case Kind::Sine: return std::sin(kPi * u) / kPi;
    case Kind::Skewed: return u * (1.0 - u) * (1.0 + 2.0 * u);
    case Kind::Inverted: return u * (u - 1.0);
    case Kind::Linear: return k_ * u;
  }
  return 0.0;
}

double Reaction::df_raw(double u) const {
  switch (kind_) {
    case Kind::Logistic: return 1.0 - 2.0 * u;
    case Kind::Cubic: return 1.0 - 3.0 * u * u;
    case Kind::Sine: return std::cos(kPi * u);
    case Kind::Skewed: return 1.0 + 2.0 * u - 6.0 * u * u;
    case Kind::Inverted: return 2.0 * u - 1.0;
    case Kind::Linear: return k_;
  }
  return 0.0;
}

double Reaction::f(double u) const { return u < 0.0 ? fp0_ * u : f_raw(u); }

double Reaction::df(double u) const { return u < 0.0 ? fp0_ : df_raw(u); }

double Reaction::d2f(double u) const {
  if (u < 0.0) return 0.0;  // linear extension
  switch (kind_) {
    case Kind::Logistic: return -2.0;
    case Kind::Cubic: return -6.0 * u;
    case Kind::Sine: return -kPi * std::sin(kPi * u);
    case Kind::Skewed: return 2.0 - 12.0 * u;
    case Kind::Inverted: return 2.0;
    case Kind::Linear: return 0.0;
  }
  // Generic fallback, kept for future presets without closed-form curvature.
  const double h = 1e-5;
  return (f(u + h) - 2.0 * f(u) + f(u - h)) / (h * h);
}

VerificationReport validate_kpp(const Reaction& r, int samples, double tol) {
  if (samples < 3) throw std::invalid_argument("validate_kpp: samples must be >= 3");
  VerificationReport rep("validate-kpp:" + r.spec());

  double min_interior = std::numeric_limits<double>::infinity();
  double min_at = 0.0;
  double max_slope_excess = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= samples; ++i) {
    const double u = static_cast<double>(i) / samples;
    const double fu = r.f(u);
    const double dfu = r.df(u);
    if (!std::isfinite(fu) || !std::isfinite(dfu)) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "non-finite reaction value at u=%.6g", u);
      throw InvalidReactionError(buf);
    }
    if (i > 0 && i < samples && fu < min_interior) {
      min_interior = fu;
      min_at = u;
    }
    max_slope_excess = std::max(max_slope_excess, dfu - r.fp0());
  }

  rep.add_le("zero-at-0", std::abs(r.f(0.0)), tol);
  rep.add_le("zero-at-1", std::abs(r.f(1.0)), tol);
  rep.add("slope-at-0-positive", r.fp0(), tol, r.fp0() > tol);
  rep.add("slope-at-1-negative", r.fp1(), -tol, r.fp1() < -tol);
  {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "minimum attained at u=%.6g", min_at);
    rep.add("interior-positive", min_interior, 0.0, min_interior > 0.0, buf);
  }
  rep.add_le("slope-bound", max_slope_excess, tol, "max of f'(u) - f'(0) on [0,1]");
  return rep;
}

VerificationReport validate_concavity(const Reaction& r, int samples, double tol) {
  if (samples < 3) throw std::invalid_argument("validate_concavity: samples must be >= 3");
  VerificationReport rep("validate-concavity:" + r.spec());
  double max_d2 = -std::numeric_limits<double>::infinity();
  double arg = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double u = static_cast<double>(i) / samples;
    const double v = r.d2f(u);
    if (!std::isfinite(v)) {
      throw InvalidReactionError("non-finite curvature during concavity validation");
    }
    if (v > max_d2) {
      max_d2 = v;
      arg = u;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "max f'' at u=%.6g (%s curvature)", arg,
                r.has_analytic_d2f() ? "analytic" : "finite-difference");
  rep.add_le("concave", max_d2, tol, buf);
  return rep;
}

double eta(const Reaction& r, double m, double t, double rtol) {
  if (!(m > 0.0 && m < 1.0)) throw std::domain_error("eta: level must lie in (0,1)");
  return rkdp_solve([&r](double y) { return r.f(y); }, m, 0.0, t, rtol);
}

std::vector<double> eta_series(const Reaction& r, double m, const std::vector<double>& ts,
                               double rtol) {
  if (!(m > 0.0 && m < 1.0)) throw std::domain_error("eta_series: level must lie in (0,1)");
  std::vector<std::size_t> order(ts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&ts](std::size_t a, std::size_t b) { return ts[a] < ts[b]; });
  std::vector<double> out(ts.size(), 0.0);
  const auto rhs = [&r](double y) { return r.f(y); };
  // Forward sweep over non-negative times, continuing from the previous value.
  double y = m, t_prev = 0.0;
  for (std::size_t idx : order) {
    if (ts[idx] < 0.0) continue;
    y = rkdp_solve(rhs, y, t_prev, ts[idx], rtol);
    t_prev = ts[idx];
    out[idx] = y;
  }
  // Backward sweep over negative times in descending order.
  y = m;
  t_prev = 0.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (ts[*it] >= 0.0) continue;
    y = rkdp_solve(rhs, y, t_prev, ts[*it], rtol);
    t_prev = ts[*it];
    out[*it] = y;
  }
  return out;
}

}  // namespace kpp
