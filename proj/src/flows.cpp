#include "flowlab/flows.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace flowlab {

FlowKind FlowKind::list_extended(double a_n) {
  if (!(a_n > 0.0)) throw ConfigError("list coupling a_n must be positive");
  return {FlowTag::ListExtended, a_n, 0.0};
}

FlowKind FlowKind::ricci_harmonic(double a0, double decay_rate) {
  if (!(a0 > 0.0)) throw ConfigError("coupling a(0) must be positive");
  return {FlowTag::RicciHarmonic, a0, decay_rate};
}

double FlowKind::coupling_at(double t) const {
  switch (tag) {
    case FlowTag::ListExtended: return coupling;
    case FlowTag::RicciHarmonic: return coupling - decay * t;
    default: return 0.0;
  }
}

double FlowKind::coupling_rate() const {
  return tag == FlowTag::RicciHarmonic ? -decay : 0.0;
}

std::string FlowKind::name() const {
  switch (tag) {
    case FlowTag::Static: return "static";
    case FlowTag::Ricci: return "ricci";
    case FlowTag::ListExtended: return "list";
    case FlowTag::RicciHarmonic: return "rh";
  }
  return "?";
}

FlowState make_flow_state(FlowKind kind, double time, Metric metric) {
  if (kind.has_aux())
    throw ConfigError("flow kind " + kind.name() + " needs a coupled scalar");
  ScalarField none{metric.grid, {}};
  return FlowState{kind, time, std::move(metric), std::move(none)};
}

FlowState make_flow_state(FlowKind kind, double time, Metric metric, ScalarField aux) {
  if (!kind.has_aux())
    throw ConfigError("flow kind " + kind.name() + " takes no coupled scalar");
  require_same_grid(metric.grid, aux.grid, "make_flow_state");
  if (kind.coupling_at(time) <= 0.0)
    throw ConfigError("coupling must be positive at the initial time");
  return FlowState{kind, time, std::move(metric), std::move(aux)};
}

TensorField alpha(const FlowState& s) {
  switch (s.kind.tag) {
    case FlowTag::Static:
      return make_tensor(s.metric.grid);
    case FlowTag::Ricci:
      return ricci_tensor(s.metric);
    default: {
      TensorField rc = ricci_tensor(s.metric);
      const double coup = s.kind.coupling_at(s.time);
      std::vector<double> da = fd::deriv(s.aux.v, s.metric.grid.dx());
      for (size_t i = 0; i < rc.xx.size(); ++i) rc.xx[i] -= coup * da[i] * da[i];
      return rc;
    }
  }
}

ScalarField trace_a(const FlowState& s) {
  if (s.kind.tag == FlowTag::Static) return make_scalar(s.metric.grid, 0.0);
  return metric_trace(s.metric, alpha(s));
}

double stable_dt(const FlowState& s, double t_end, double cfl) {
  if (!(cfl > 0.0)) throw ConfigError("cfl must be positive");
  double coup = std::max(std::abs(s.kind.coupling_at(s.time)),
                         std::abs(s.kind.coupling_at(t_end)));
  const double h = s.metric.grid.dx();
  return cfl * h * h * min_value(s.metric.a) / std::max(1.0, coup);
}

namespace {

// Right-hand side of the coupled system (a, b, aux) at a given time.
struct Rhs {
  std::vector<double> da, db, daux;
};

Rhs flow_rhs(const FlowKind& kind, double t, const Metric& g, const ScalarField& aux) {
  const size_t n = g.a.size();
  if (min_value(g.a) <= 0.0 || min_value(g.b) <= 0.0 || !all_finite(g.a) || !all_finite(g.b))
    throw NumericError("metric lost positivity during evolution", t);
  Rhs r;
  r.da.assign(n, 0.0);
  r.db.assign(n, 0.0);
  if (kind.tag != FlowTag::Static) {
    ScalarField k = gauss_curvature(g);
    for (size_t i = 0; i < n; ++i) {
      r.da[i] = -2.0 * k.v[i] * g.a[i];
      r.db[i] = -2.0 * k.v[i] * g.b[i];
    }
  }
  if (kind.has_aux()) {
    const double coup = kind.coupling_at(t);
    if (coup <= 0.0) throw NumericError("coupling became non-positive", t);
    std::vector<double> dv = fd::deriv(aux.v, g.grid.dx());
    for (size_t i = 0; i < n; ++i) r.da[i] += 2.0 * coup * dv[i] * dv[i];
    r.daux = laplace_beltrami(g, aux).v;
  }
  return r;
}

}  // namespace

FlowTrajectory evolve(const FlowState& initial, double dt, double t_end) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(t_end > initial.time)) throw ConfigError("t_end must exceed the initial time");
  const double span = t_end - initial.time;
  const long n_full = std::lround(span / dt);
  if (n_full < 1 || std::abs(n_full * dt - span) > 1e-9 * std::max(1.0, std::abs(t_end)))
    throw ConfigError("(t_end - t_start) must be a whole number of steps of dt");

  FlowTrajectory traj;
  traj.kind = initial.kind;
  traj.dt = dt;
  traj.states.reserve(static_cast<size_t>(2 * n_full + 1));
  traj.states.push_back(initial);

  const double hs = 0.5 * dt;  // substep
  const size_t n = initial.metric.a.size();
  const bool aux = initial.kind.has_aux();

  for (long step = 0; step < 2 * n_full; ++step) {
    const FlowState& s = traj.states.back();
    const double t = initial.time + step * hs;

    auto stage = [&](const Rhs& k, double w) {
      Metric m = s.metric;
      ScalarField av = s.aux;
      for (size_t i = 0; i < n; ++i) {
        m.a[i] += w * k.da[i];
        m.b[i] += w * k.db[i];
      }
      if (aux)
        for (size_t i = 0; i < n; ++i) av.v[i] += w * k.daux[i];
      return std::make_pair(std::move(m), std::move(av));
    };

    Rhs k1 = flow_rhs(s.kind, t, s.metric, s.aux);
    auto [m2, a2] = stage(k1, 0.5 * hs);
    Rhs k2 = flow_rhs(s.kind, t + 0.5 * hs, m2, a2);
    auto [m3, a3] = stage(k2, 0.5 * hs);
    Rhs k3 = flow_rhs(s.kind, t + 0.5 * hs, m3, a3);
    auto [m4, a4] = stage(k3, hs);
    Rhs k4 = flow_rhs(s.kind, t + hs, m4, a4);

    FlowState next = s;
    next.time = initial.time + (step + 1) * hs;
    for (size_t i = 0; i < n; ++i) {
      next.metric.a[i] += hs / 6.0 * (k1.da[i] + 2.0 * k2.da[i] + 2.0 * k3.da[i] + k4.da[i]);
      next.metric.b[i] += hs / 6.0 * (k1.db[i] + 2.0 * k2.db[i] + 2.0 * k3.db[i] + k4.db[i]);
    }
    if (aux)
      for (size_t i = 0; i < n; ++i)
        next.aux.v[i] += hs / 6.0 * (k1.daux[i] + 2.0 * k2.daux[i] + 2.0 * k3.daux[i] + k4.daux[i]);

    if (!all_finite(next.metric.a) || !all_finite(next.metric.b) ||
        (aux && !all_finite(next.aux.v)))
      throw NumericError("flow blew up (non-finite state)", next.time);
    if (min_value(next.metric.a) <= 0.0 || min_value(next.metric.b) <= 0.0)
      throw NumericError("metric lost positivity", next.time);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

ScalarField b_minus_delta_a_closed(const FlowState& s) {
  switch (s.kind.tag) {
    case FlowTag::Static:
    case FlowTag::Ricci:
      return make_scalar(s.metric.grid, 0.0);
    default: {
      const double coup = s.kind.coupling_at(s.time);
      const double rate = s.kind.coupling_rate();
      ScalarField lap = laplace_beltrami(s.metric, s.aux);
      ScalarField out = make_scalar(s.metric.grid);
      if (rate == 0.0) {
        for (size_t i = 0; i < out.v.size(); ++i)
          out.v[i] = 2.0 * coup * lap.v[i] * lap.v[i];
      } else {
        ScalarField gsq = grad_norm_sq(s.metric, s.aux);
        for (size_t i = 0; i < out.v.size(); ++i)
          out.v[i] = 2.0 * coup * lap.v[i] * lap.v[i] - rate * gsq.v[i];
      }
      return out;
    }
  }
}

ScalarField b_minus_delta_a_numeric(const FlowTrajectory& traj, int half_index) {
  if (half_index < 1 || half_index + 1 >= traj.half_count())
    throw ConfigError("b_minus_delta_a_numeric needs both half-step neighbors");
  const FlowState& s = traj.half(half_index);
  ScalarField a_prev = trace_a(traj.half(half_index - 1));
  ScalarField a_next = trace_a(traj.half(half_index + 1));
  ScalarField asq = tensor_norm_sq(s.metric, alpha(s));
  ScalarField lap_a = laplace_beltrami(s.metric, trace_a(s));
  ScalarField out = make_scalar(s.metric.grid);
  for (size_t i = 0; i < out.v.size(); ++i) {
    const double da_dt = (a_next.v[i] - a_prev.v[i]) / traj.dt;
    out.v[i] = da_dt - 2.0 * asq.v[i] - lap_a.v[i];
  }
  return out;
}

VectorField grad_a_minus_2div_alpha(const FlowState& s) {
  ScalarField a = trace_a(s);
  std::vector<double> da = fd::deriv(a.v, s.metric.grid.dx());
  VectorField div = divergence(s.metric, alpha(s));
  VectorField out = make_vector(s.metric.grid);
  for (size_t i = 0; i < out.x.size(); ++i) {
    out.x[i] = da[i] - 2.0 * div.x[i];
    out.y[i] = -2.0 * div.y[i];
  }
  return out;
}

VectorField grad_a_minus_2div_alpha_closed(const FlowState& s) {
  VectorField out = make_vector(s.metric.grid);
  if (!s.kind.has_aux()) return out;
  const double coup = s.kind.coupling_at(s.time);
  ScalarField lap = laplace_beltrami(s.metric, s.aux);
  std::vector<double> dv = fd::deriv(s.aux.v, s.metric.grid.dx());
  for (size_t i = 0; i < out.x.size(); ++i) out.x[i] = 2.0 * coup * lap.v[i] * dv[i];
  return out;
}

ScalarField theta_general(const FlowState& s, const VectorField& V, const ScalarField& bmda) {
  require_same_grid(s.metric.grid, V.grid, "theta_general");
  require_same_grid(s.metric.grid, bmda.grid, "theta_general");
  TensorField diff = tensor_add(ricci_tensor(s.metric), alpha(s), -1.0);
  ScalarField quad = tensor_apply(diff, V);
  ScalarField lin = pair_form(grad_a_minus_2div_alpha(s), V);
  ScalarField out = make_scalar(s.metric.grid);
  for (size_t i = 0; i < out.v.size(); ++i)
    out.v[i] = quad.v[i] + lin.v[i] + 0.5 * bmda.v[i];
  return out;
}

ScalarField theta_closed(const FlowState& s, const VectorField& V) {
  require_same_grid(s.metric.grid, V.grid, "theta_closed");
  switch (s.kind.tag) {
    case FlowTag::Static:
      return tensor_apply(ricci_tensor(s.metric), V);
    case FlowTag::Ricci:
      return make_scalar(s.metric.grid, 0.0);
    default: {
      const double coup = s.kind.coupling_at(s.time);
      const double rate = s.kind.coupling_rate();
      ScalarField lap = laplace_beltrami(s.metric, s.aux);
      std::vector<double> dv = fd::deriv(s.aux.v, s.metric.grid.dx());
      ScalarField out = make_scalar(s.metric.grid);
      for (size_t i = 0; i < out.v.size(); ++i) {
        const double w = dv[i] * V.x[i] + lap.v[i];  // <grad aux, V> + Lap aux
        out.v[i] = coup * w * w;
      }
      if (rate != 0.0) {
        ScalarField gsq = grad_norm_sq(s.metric, s.aux);
        for (size_t i = 0; i < out.v.size(); ++i) out.v[i] -= 0.5 * rate * gsq.v[i];
      }
      return out;
    }
  }
}

}  // namespace flowlab
