#include "flowlab/conjugate_heat.hpp"

#include <cmath>
#include <utility>

namespace flowlab {

namespace {

// d(u)/ds = Lap_g u - A u in reversed time s = t_final - t.
std::vector<double> heat_rhs(const Metric& g, const ScalarField& A,
                             const std::vector<double>& u) {
  ScalarField uf{g.grid, u};
  ScalarField lap = laplace_beltrami(g, uf);
  std::vector<double> r(u.size());
  for (size_t i = 0; i < r.size(); ++i) r[i] = lap.v[i] - A.v[i] * u[i];
  return r;
}

}  // namespace

HeatSolution solve_backward(const FlowTrajectory& traj, const ScalarField& terminal,
                            bool normalize) {
  const FlowState& last = traj.states.back();
  require_same_grid(last.metric.grid, terminal.grid, "solve_backward");
  if (!all_finite(terminal.v) || min_value(terminal.v) <= 0.0)
    throw ConfigError("terminal data must be finite and strictly positive");

  const int fulls = traj.full_count();
  HeatSolution sol;
  sol.dt = traj.dt;
  sol.times.resize(static_cast<size_t>(fulls));
  sol.u.resize(static_cast<size_t>(fulls));

  ScalarField u = terminal;
  if (normalize) {
    const double m0 = integrate(last.metric, u);
    for (double& x : u.v) x /= m0;
  }
  sol.mass = integrate(last.metric, u);

  sol.times[static_cast<size_t>(fulls - 1)] = last.time;
  sol.u[static_cast<size_t>(fulls - 1)] = u;

  // March j+1 -> j. Stage metrics come straight off the stored half steps.
  for (int j = fulls - 2; j >= 0; --j) {
    const FlowState& s_hi = traj.full(j + 1);
    const FlowState& s_mid = traj.half(2 * j + 1);
    const FlowState& s_lo = traj.full(j);
    ScalarField a_hi = trace_a(s_hi), a_mid = trace_a(s_mid), a_lo = trace_a(s_lo);

    const double ds = traj.dt;
    const size_t n = u.v.size();
    std::vector<double> k1 = heat_rhs(s_hi.metric, a_hi, u.v);
    std::vector<double> tmp(n);
    for (size_t i = 0; i < n; ++i) tmp[i] = u.v[i] + 0.5 * ds * k1[i];
    std::vector<double> k2 = heat_rhs(s_mid.metric, a_mid, tmp);
    for (size_t i = 0; i < n; ++i) tmp[i] = u.v[i] + 0.5 * ds * k2[i];
    std::vector<double> k3 = heat_rhs(s_mid.metric, a_mid, tmp);
    for (size_t i = 0; i < n; ++i) tmp[i] = u.v[i] + ds * k3[i];
    std::vector<double> k4 = heat_rhs(s_lo.metric, a_lo, tmp);
    for (size_t i = 0; i < n; ++i)
      u.v[i] += ds / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    if (!all_finite(u.v))
      throw NumericError("conjugate heat solution blew up", s_lo.time);
    if (min_value(u.v) <= 0.0)
      throw NumericError("conjugate heat solution lost positivity", s_lo.time);
    const double m = integrate(s_lo.metric, u);
    if (std::abs(m - sol.mass) > 1e-8 * std::abs(sol.mass))
      throw NumericError("conjugate heat mass drifted", s_lo.time);

    sol.times[static_cast<size_t>(j)] = s_lo.time;
    sol.u[static_cast<size_t>(j)] = u;
  }
  return sol;
}

LogFields log_fields(const Metric& g, const ScalarField& u) {
  require_same_grid(g.grid, u.grid, "log_fields");
  if (min_value(u.v) <= 0.0) throw ConfigError("log_fields needs positive u");
  ScalarField lu = make_scalar(g.grid);
  for (size_t i = 0; i < lu.v.size(); ++i) lu.v[i] = std::log(u.v[i]);
  LogFields out{lu, grad_norm_sq(g, lu), hessian(g, lu)};
  return out;
}

}  // namespace flowlab
