#include "flowlab/entropy.hpp"

#include <cmath>
#include <limits>

namespace flowlab {

namespace {

constexpr double kDim = 2.0;
constexpr double kFourPi = 12.566370614359172953850573533118;

ScalarField check_positive_density(const Metric& g, const ScalarField& u, const char* where) {
  require_same_grid(g.grid, u.grid, where);
  if (min_value(u.v) <= 0.0) throw ConfigError(std::string(where) + ": u must be positive");
  return u;
}

}  // namespace

double entropy_E(const Metric& g, const ScalarField& u) {
  check_positive_density(g, u, "entropy_E");
  ScalarField integrand = make_scalar(g.grid);
  for (size_t i = 0; i < u.v.size(); ++i) integrand.v[i] = u.v[i] * std::log(u.v[i]);
  return integrate(g, integrand);
}

double entropy_E1(const FlowState& s, const ScalarField& u) {
  check_positive_density(s.metric, u, "entropy_E1");
  LogFields lf = log_fields(s.metric, u);
  ScalarField a = trace_a(s);
  ScalarField integrand = make_scalar(s.metric.grid);
  for (size_t i = 0; i < u.v.size(); ++i)
    integrand.v[i] = (lf.grad_sq.v[i] + a.v[i]) * u.v[i];
  return integrate(s.metric, integrand);
}

double entropy_E2(const FlowState& s, const ScalarField& u, const ScalarField& bmda) {
  check_positive_density(s.metric, u, "entropy_E2");
  LogFields lf = log_fields(s.metric, u);
  TensorField diff = tensor_add(alpha(s), lf.hess, -1.0);
  ScalarField nsq = tensor_norm_sq(s.metric, diff);
  ScalarField th = theta_general(s, gradient(s.metric, lf.log_u), bmda);
  ScalarField integrand = make_scalar(s.metric.grid);
  for (size_t i = 0; i < u.v.size(); ++i)
    integrand.v[i] = 2.0 * (nsq.v[i] + th.v[i]) * u.v[i];
  return integrate(s.metric, integrand);
}

namespace {

ScalarField weight_from_phi(const FlowState& s, const ScalarField& phi, const char* where) {
  require_same_grid(s.metric.grid, phi.grid, where);
  ScalarField w = make_scalar(s.metric.grid);
  for (size_t i = 0; i < phi.v.size(); ++i) w.v[i] = std::exp(-phi.v[i]);
  const double m = integrate(s.metric, w);
  if (std::abs(m - 1.0) > 1e-6)
    throw ConfigError(std::string(where) + ": integral of e^{-phi} must be 1");
  return w;
}

}  // namespace

double f_functional(const FlowState& s, const ScalarField& phi, double k) {
  ScalarField w = weight_from_phi(s, phi, "f_functional");
  ScalarField gsq = grad_norm_sq(s.metric, phi);
  ScalarField a = trace_a(s);
  ScalarField integrand = make_scalar(s.metric.grid);
  for (size_t i = 0; i < w.v.size(); ++i)
    integrand.v[i] = (gsq.v[i] + k * a.v[i]) * w.v[i];
  return integrate(s.metric, integrand);
}

double f_derivative_formula(const FlowState& s, const ScalarField& phi, double k,
                            const ScalarField& bmda) {
  ScalarField w = weight_from_phi(s, phi, "f_derivative_formula");
  TensorField al = alpha(s);
  TensorField sum = tensor_add(al, hessian(s.metric, phi));
  ScalarField sum_sq = tensor_norm_sq(s.metric, sum);
  ScalarField al_sq = tensor_norm_sq(s.metric, al);
  VectorField minus_grad_phi = gradient(s.metric, phi);
  for (double& x : minus_grad_phi.x) x = -x;
  ScalarField th = theta_general(s, minus_grad_phi, bmda);
  ScalarField integrand = make_scalar(s.metric.grid);
  for (size_t i = 0; i < w.v.size(); ++i)
    integrand.v[i] = (2.0 * (sum_sq.v[i] + (k - 1.0) * al_sq.v[i]) +
                      2.0 * (th.v[i] + 0.5 * (k - 1.0) * bmda.v[i])) *
                     w.v[i];
  return integrate(s.metric, integrand);
}

std::pair<double, double> au_identity(const FlowTrajectory& traj, const HeatSolution& heat,
                                      int full_index) {
  if (full_index < 1 || full_index + 1 >= traj.full_count())
    throw ConfigError("au_identity needs an interior full step");
  auto au = [&](int j) {
    const FlowState& s = traj.full(j);
    ScalarField a = trace_a(s);
    ScalarField integrand = make_scalar(s.metric.grid);
    const ScalarField& u = heat.u.at(static_cast<size_t>(j));
    for (size_t i = 0; i < integrand.v.size(); ++i) integrand.v[i] = a.v[i] * u.v[i];
    return integrate(s.metric, integrand);
  };
  const double lhs = (au(full_index + 1) - au(full_index - 1)) / (2.0 * traj.dt);

  const FlowState& s = traj.full(full_index);
  const ScalarField& u = heat.u.at(static_cast<size_t>(full_index));
  ScalarField asq = tensor_norm_sq(s.metric, alpha(s));
  ScalarField bmda = b_minus_delta_a_closed(s);
  ScalarField integrand = make_scalar(s.metric.grid);
  for (size_t i = 0; i < integrand.v.size(); ++i)
    integrand.v[i] = (2.0 * asq.v[i] + bmda.v[i]) * u.v[i];
  return {lhs, integrate(s.metric, integrand)};
}

double w_entropy(const FlowState& s, const ScalarField& u, double T_ref) {
  check_positive_density(s.metric, u, "w_entropy");
  const double tau = T_ref - s.time;
  if (!(tau > 0.0)) throw ConfigError("w_entropy needs T_ref > t");
  LogFields lf = log_fields(s.metric, u);
  ScalarField a = trace_a(s);
  const double log_norm = std::log(kFourPi * tau);  // log (4 pi tau)^{n/2}, n = 2
  ScalarField integrand = make_scalar(s.metric.grid);
  for (size_t i = 0; i < u.v.size(); ++i) {
    const double phi = -(log_norm + lf.log_u.v[i]);
    integrand.v[i] = (tau * (lf.grad_sq.v[i] + a.v[i]) + phi - kDim) * u.v[i];
  }
  return integrate(s.metric, integrand);
}

namespace {

double w_derivative_common(const FlowState& s, const ScalarField& u, double tau_signed,
                           const ScalarField& bmda) {
  // tau_signed = T_ref - t for the shrinker, -(t - T_ref) for the expander.
  // Both rates read 2 |tau_signed| integral (|alpha - Hess log u - g/(2 tau_signed)|^2 + Theta) u dy.
  LogFields lf = log_fields(s.metric, u);
  TensorField d = tensor_add(alpha(s), lf.hess, -1.0);
  for (size_t i = 0; i < d.xx.size(); ++i) {
    d.xx[i] -= s.metric.a[i] / (2.0 * tau_signed);
    d.yy[i] -= s.metric.b[i] / (2.0 * tau_signed);
  }
  ScalarField nsq = tensor_norm_sq(s.metric, d);
  ScalarField th = theta_general(s, gradient(s.metric, lf.log_u), bmda);
  ScalarField integrand = make_scalar(s.metric.grid);
  for (size_t i = 0; i < u.v.size(); ++i)
    integrand.v[i] = (nsq.v[i] + th.v[i]) * u.v[i];
  return 2.0 * std::abs(tau_signed) * integrate(s.metric, integrand);
}

}  // namespace

double w_derivative_formula(const FlowState& s, const ScalarField& u, double T_ref,
                            const ScalarField& bmda) {
  check_positive_density(s.metric, u, "w_derivative_formula");
  const double tau = T_ref - s.time;
  if (!(tau > 0.0)) throw ConfigError("w_derivative_formula needs T_ref > t");
  return w_derivative_common(s, u, tau, bmda);
}

double w_plus_entropy(const FlowState& s, const ScalarField& u, double T_ref) {
  check_positive_density(s.metric, u, "w_plus_entropy");
  const double sigma = s.time - T_ref;
  if (!(sigma > 0.0)) throw ConfigError("w_plus_entropy needs t > T_ref");
  LogFields lf = log_fields(s.metric, u);
  ScalarField a = trace_a(s);
  const double log_norm = std::log(kFourPi * sigma);
  ScalarField integrand = make_scalar(s.metric.grid);
  for (size_t i = 0; i < u.v.size(); ++i) {
    const double phi = -(log_norm + lf.log_u.v[i]);
    integrand.v[i] = (sigma * (lf.grad_sq.v[i] + a.v[i]) - phi + kDim) * u.v[i];
  }
  return integrate(s.metric, integrand);
}

double w_plus_derivative_formula(const FlowState& s, const ScalarField& u, double T_ref,
                                 const ScalarField& bmda) {
  check_positive_density(s.metric, u, "w_plus_derivative_formula");
  const double sigma = s.time - T_ref;
  if (!(sigma > 0.0)) throw ConfigError("w_plus_derivative_formula needs t > T_ref");
  return w_derivative_common(s, u, -sigma, bmda);
}

EntropySeries build_series(const FlowTrajectory& traj, const HeatSolution& heat,
                           const SeriesSpec& spec) {
  if (spec.stride < 1) throw ConfigError("series stride must be >= 1");
  if (heat.u.size() != static_cast<size_t>(traj.full_count()))
    throw ConfigError("heat solution does not match the trajectory");
  const double nan = std::numeric_limits<double>::quiet_NaN();

  EntropySeries out;
  out.k_list = spec.k_list;
  out.F.resize(spec.k_list.size());
  out.dF.resize(spec.k_list.size());

  for (int j = 0; j < traj.full_count(); j += spec.stride) {
    const FlowState& s = traj.full(j);
    const ScalarField& u = heat.u[static_cast<size_t>(j)];

    ScalarField bmda = (spec.bmda_numeric && j > 0 && j + 1 < traj.full_count())
                           ? b_minus_delta_a_numeric(traj, 2 * j)
                           : b_minus_delta_a_closed(s);

    out.full_index.push_back(j);
    out.t.push_back(s.time);
    out.vol.push_back(volume(s.metric));
    out.E.push_back(entropy_E(s.metric, u));
    out.E1.push_back(entropy_E1(s, u));
    out.E2.push_back(entropy_E2(s, u, bmda));

    LogFields lf = log_fields(s.metric, u);
    ScalarField phi = lf.log_u;
    for (double& x : phi.v) x = -x;
    for (size_t ki = 0; ki < spec.k_list.size(); ++ki) {
      out.F[ki].push_back(f_functional(s, phi, spec.k_list[ki]));
      out.dF[ki].push_back(f_derivative_formula(s, phi, spec.k_list[ki], bmda));
    }

    if (spec.T_ref && *spec.T_ref - s.time > 0.0) {
      out.W.push_back(w_entropy(s, u, *spec.T_ref));
      out.dW.push_back(w_derivative_formula(s, u, *spec.T_ref, bmda));
    } else {
      out.W.push_back(nan);
      out.dW.push_back(nan);
    }
    if (spec.T_plus_ref && s.time - *spec.T_plus_ref > 0.0) {
      out.Wp.push_back(w_plus_entropy(s, u, *spec.T_plus_ref));
      out.dWp.push_back(w_plus_derivative_formula(s, u, *spec.T_plus_ref, bmda));
    } else {
      out.Wp.push_back(nan);
      out.dWp.push_back(nan);
    }

    out.min_theta.push_back(min_value(theta_closed(s, gradient(s.metric, lf.log_u)).v));
    out.min_bmda.push_back(min_value(b_minus_delta_a_closed(s).v));
  }
  return out;
}

}  // namespace flowlab
