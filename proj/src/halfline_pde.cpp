#include "kpp/halfline_pde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "kpp/errors.hpp"

namespace kpp {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

double time_eps(double t) { return 1e-9 * std::max(1.0, std::abs(t)); }

}  // namespace

void Grid::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("grid: L must be positive");
  if (nx < 64) throw ConfigError("grid: nx must be at least 64");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("grid: dt must be positive");
  if (dt > dx() + 1e-12) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "grid: dt=%.6g exceeds dx=%.6g (accuracy envelope)", dt,
                  dx());
    throw ConfigError(buf);
  }
}

double solver_tolerance(const Grid& g) { return g.dx() * g.dx() + g.dt * g.dt; }

Solver::Solver(const Reaction& r, const Grid& g) : r_(r), g_(g) {
  g_.validate();
  const double dx = g_.dx();
  a_ = g_.dt / (2.0 * dx * dx);
  const std::size_t n = static_cast<std::size_t>(g_.nx) + 1;
  // Forward-elimination coefficients of the constant tridiagonal matrix
  // (I - a D): identity first row, (-a, 1+2a, -a) inside, (-2a, 1+2a) last.
  cp_.assign(n, 0.0);
  mi_.assign(n, 0.0);
  cp_[0] = 0.0;  // first-row upper entry is zero
  mi_[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double lower = (i + 1 == n) ? -2.0 * a_ : -a_;
    const double diag = 1.0 + 2.0 * a_;
    const double denom = diag - lower * cp_[i - 1];
    mi_[i] = 1.0 / denom;
    cp_[i] = (i + 1 == n) ? 0.0 : -a_ * mi_[i];
  }
  work_.assign(n, 0.0);
}

void Solver::react_half(std::vector<double>& u) const {
  const double h = 0.5 * g_.dt;
  for (std::size_t i = 1; i < u.size(); ++i) {
    const double mid = u[i] + 0.5 * h * r_.f(u[i]);
    u[i] += h * r_.f(mid);
  }
  u[0] = 0.0;
}

void Solver::solve_tridiagonal(std::vector<double>& d) {
  const std::size_t n = d.size();
  d[0] *= mi_[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double lower = (i + 1 == n) ? -2.0 * a_ : -a_;
    d[i] = (d[i] - lower * d[i - 1]) * mi_[i];
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    d[i] -= cp_[i] * d[i + 1];
  }
}

void Solver::diffuse_trapezoidal(std::vector<double>& u) {
  const std::size_t n = u.size();
  work_[0] = u[0];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    work_[i] = u[i] + a_ * (u[i - 1] - 2.0 * u[i] + u[i + 1]);
  }
  work_[n - 1] = u[n - 1] + a_ * (2.0 * u[n - 2] - 2.0 * u[n - 1]);  // reflecting ghost
  solve_tridiagonal(work_);
  u.swap(work_);
}

void Solver::diffuse_implicit_half(std::vector<double>& u) {
  // Implicit Euler over dt/2 shares the trapezoidal left-hand matrix.
  solve_tridiagonal(u);
}

void Solver::advance(std::vector<double>& u, long k) {
  if (u.size() != static_cast<std::size_t>(g_.nx) + 1) {
    throw std::invalid_argument("Solver::advance: field size does not match the grid");
  }
  react_half(u);
  if (k < startup_steps) {
    diffuse_implicit_half(u);
    diffuse_implicit_half(u);
  } else {
    diffuse_trapezoidal(u);
  }
  react_half(u);
  for (double v : u) {
    if (!std::isfinite(v)) {
      throw BlowUpError("time stepper produced a non-finite value; reduce dt");
    }
  }
}

double Solver::wall_gradient(const std::vector<double>& u) const {
  return (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * g_.dx());
}

Field step(const Reaction& r, const Grid& g, const Field& u0) {
  Solver solver(r, g);
  solver.startup_steps = 0;
  Field out = u0;
  solver.advance(out.u, 0);
  out.t = u0.t + g.dt;
  return out;
}

Trajectory solve(const Reaction& r, const Grid& g, const Field& u0, double t_end,
                 std::vector<double> out_times, const SolveOptions& opt) {
  g.validate();
  if (u0.u.size() != static_cast<std::size_t>(g.nx) + 1) {
    throw std::invalid_argument("solve: initial field size does not match the grid");
  }
  if (!(t_end >= u0.t)) throw std::domain_error("solve: t_end precedes the initial time");
  std::sort(out_times.begin(), out_times.end());
  for (double T : out_times) {
    if (T < u0.t - time_eps(T) || T > t_end + time_eps(T)) {
      throw std::domain_error("solve: output time outside [t0, t_end]");
    }
  }

  Trajectory traj;
  traj.grid = g;
  traj.t_base = std::isnan(opt.t_base) ? u0.t : opt.t_base;
  const long k0 = opt.first_step_index;

  Solver solver(r, g);
  solver.startup_steps = opt.startup_steps;

  std::vector<double> u = u0.u;
  u[0] = 0.0;
  std::vector<double> u_prev = u;
  const auto time_at = [&traj, &g](long k) { return traj.t_base + g.dt * static_cast<double>(k); };

  std::size_t next_out = 0;
  // Snapshots at (or numerically before) the initial time are copies of u0.
  while (next_out < out_times.size() && out_times[next_out] <= u0.t + time_eps(u0.t)) {
    traj.snapshots.push_back({out_times[next_out], u});
    ++next_out;
  }

  traj.series.t.push_back(u0.t);
  traj.series.beta.push_back(solver.wall_gradient(u));
  traj.series.kappa.push_back(u.back());

  long k = k0;
  while (time_at(k) < t_end - time_eps(t_end)) {
    u_prev = u;
    const double t_prev = time_at(k);
    solver.advance(u, k);
    ++k;
    const double t_now = time_at(k);

    traj.series.t.push_back(t_now);
    traj.series.beta.push_back(solver.wall_gradient(u));
    traj.series.kappa.push_back(u.back());

    while (next_out < out_times.size() && out_times[next_out] <= t_now + time_eps(t_now)) {
      const double T = out_times[next_out];
      const double w = std::clamp((T - t_prev) / (t_now - t_prev), 0.0, 1.0);
      Field snap;
      snap.t = T;
      snap.u.resize(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) {
        snap.u[i] = (1.0 - w) * u_prev[i] + w * u[i];
      }
      traj.snapshots.push_back(std::move(snap));
      ++next_out;
    }
    if (opt.on_step) opt.on_step(k, u);
  }
  traj.steps = k - k0;
  return traj;
}

Field oracle_w(const Grid& g, double eps1, double rate, double t) {
  if (!(t > 0.0)) throw std::domain_error("oracle_w: requires t > 0");
  Field f;
  f.t = t;
  f.u.resize(static_cast<std::size_t>(g.nx) + 1);
  const double amp = eps1 * std::exp(rate * t);
  const double s = 2.0 * std::sqrt(t);
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    f.u[i] = amp * std::erf(g.dx() * static_cast<double>(i) / s);
  }
  return f;
}

double oracle_w_wall(double eps1, double rate, double t) {
  if (!(t > 0.0)) throw std::domain_error("oracle_w_wall: requires t > 0");
  return eps1 * std::exp(rate * t) / (kSqrtPi * std::sqrt(t));
}

Field oracle_v(const Grid& g, double eps1, double rate, double X1, double t) {
  if (!(t > 0.0)) throw std::domain_error("oracle_v: requires t > 0");
  Field f;
  f.t = t;
  f.u.resize(static_cast<std::size_t>(g.nx) + 1);
  const double amp = 0.5 * eps1 * std::exp(rate * t);
  const double s = 2.0 * std::sqrt(t);
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    f.u[i] = amp * std::erf((g.dx() * static_cast<double>(i) - X1) / s);
  }
  return f;
}

std::vector<FieldDerivatives> discrete_derivatives(const std::vector<Field>& snaps, double dx) {
  const std::size_t m = snaps.size();
  if (m < 3) throw std::invalid_argument("discrete_derivatives: need at least 3 snapshots");
  const std::size_t n = snaps.front().u.size();
  if (n < 4) throw std::invalid_argument("discrete_derivatives: need at least 4 nodes");
  for (const Field& s : snaps) {
    if (s.u.size() != n) {
      throw std::invalid_argument("discrete_derivatives: inconsistent snapshot sizes");
    }
  }
  std::vector<FieldDerivatives> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::vector<double>& u = snaps[j].u;
    FieldDerivatives& d = out[j];
    d.ux.resize(n);
    d.uxx.resize(n);
    d.ut.resize(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      d.ux[i] = (u[i + 1] - u[i - 1]) / (2.0 * dx);
      d.uxx[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (dx * dx);
    }
    d.ux[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dx);
    d.ux[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * dx);
    d.uxx[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / (dx * dx);
    d.uxx[n - 1] = (2.0 * u[n - 1] - 5.0 * u[n - 2] + 4.0 * u[n - 3] - u[n - 4]) / (dx * dx);

    const std::size_t jm = (j == 0) ? 0 : j - 1;
    const std::size_t jp = (j + 1 == m) ? m - 1 : j + 1;
    const double span = snaps[jp].t - snaps[jm].t;
    if (!(span > 0.0)) {
      throw std::invalid_argument("discrete_derivatives: snapshot times must increase");
    }
    for (std::size_t i = 0; i < n; ++i) {
      d.ut[i] = (snaps[jp].u[i] - snaps[jm].u[i]) / span;
    }
  }
  return out;
}

}  // namespace kpp
