#include "flowlab/checks.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "flowlab/conjugate_heat.hpp"
#include "flowlab/entropy.hpp"
#include "flowlab/errors.hpp"
#include "flowlab/fourier.hpp"
#include "flowlab/geometry.hpp"
#include "flowlab/runner.hpp"
#include "flowlab/sphere.hpp"
#include "flowlab/spectrum.hpp"

namespace flowlab::verify {

double dense_lowest_eigenvalue(const Metric& g, const ScalarField& A, double c) {
  require_same_grid(g.grid, A.grid, "dense_lowest_eigenvalue");
  const int n = g.grid.n;
  const double h = g.grid.dx();
  std::vector<double> w(n), mu(n);
  for (int i = 0; i < n; ++i) {
    w[i] = std::sqrt(g.b[i] / g.a[i]);
    mu[i] = std::sqrt(g.a[i] * g.b[i]);
  }
  // S = D^{1/2} L D^{-1/2}, D = diag(mu): symmetric, same spectrum as L.
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int ip = (i + 1) % n, im = (i + n - 1) % n;
    const double cp = 0.5 * (w[i] + w[ip]);
    const double cm = 0.5 * (w[i] + w[im]);
    S(i, i) = (cp + cm) / (h * h * mu[i]) + c * A.v[i];
    S(i, ip) = -cp / (h * h * std::sqrt(mu[i] * mu[ip]));
    S(i, im) = -cm / (h * h * std::sqrt(mu[i] * mu[im]));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

struct Sink {
  std::vector<CheckResult>& out;
  std::string suite;
  double scale;

  void add(const std::string& name, int criterion, double measured, double tol) {
    double t = tol * scale;
    out.push_back({name, suite, criterion, measured, t, measured <= t});
  }
};

FourierSeries one_mode(int m, double amp_cos, double amp_sin = 0.0) {
  FourierSeries f;
  f.modes.push_back({m, amp_cos, amp_sin});
  return f;
}

Metric conformal_from(const GridSpec& g, const FourierSeries& u) {
  return conformal_metric(sample(g, u));
}

VectorField sample_vector(const GridSpec& g, const FourierSeries& fx,
                          const FourierSeries& fy) {
  VectorField V = make_vector(g);
  V.x = sample(g, fx).v;
  V.y = sample(g, fy).v;
  return V;
}

std::vector<double> exp_of(const ScalarField& s) {
  std::vector<double> out(s.v.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = std::exp(s.v[i]);
  return out;
}

Metric random_ab_metric(const GridSpec& g, uint64_t seed_a, uint64_t seed_b,
                        double amp) {
  return make_metric(g, exp_of(sample(g, FourierSeries::random(seed_a, 3, amp))),
                     exp_of(sample(g, FourierSeries::random(seed_b, 3, amp))));
}

FlowKind kind_of(const std::string& which) {
  if (which == "ricci") return FlowKind::ricci();
  if (which == "list") return FlowKind::list_extended(1.0);
  if (which == "rh") return FlowKind::ricci_harmonic(1.2, 0.6);
  return FlowKind::static_metric();
}

FlowState pinned_state(const std::string& which, int n, double time) {
  GridSpec grid = make_grid(n, kTwoPi, kTwoPi);
  Metric g = conformal_from(grid, one_mode(1, 0.1));
  FlowKind kind = kind_of(which);
  if (kind.has_aux())
    return make_flow_state(kind, time, g, sample(grid, one_mode(1, 0.0, 0.5)));
  return make_flow_state(kind, time, g);
}

struct Bundle {
  FlowTrajectory traj;
  HeatSolution heat;
};

FlowTrajectory pinned_trajectory(const std::string& which, int n, double t_end) {
  FlowState s0 = pinned_state(which, n, 0.0);
  double dt = auto_dt(stable_dt(s0, t_end), t_end);
  return evolve(s0, dt, t_end);
}

Bundle pinned_run(const std::string& which, int n, double t_end) {
  FlowTrajectory traj = pinned_trajectory(which, n, t_end);
  GridSpec grid = traj.full(0).metric.grid;
  ScalarField terminal = sample_scalar(grid, [](double x) { return std::exp(0.3 * std::cos(x)); });
  HeatSolution heat = solve_backward(traj, terminal, true);
  return {std::move(traj), std::move(heat)};
}

double rel_against(double diff, double ref, double floor = 1e-4) {
  return std::abs(diff) / std::max(std::abs(ref), floor);
}

// ---------------------------------------------------------------- geometry

void geometry_checks(Sink& sink, uint64_t) {
  {
    GridSpec g = make_grid(64, kTwoPi, kTwoPi);
    double v = volume(flat_metric(g));
    sink.add("quadrature_exact", 0, std::abs(v - 4.0 * kPi * kPi) / (4.0 * kPi * kPi),
             1e-14);
  }
  {
    GridSpec g = make_grid(128, kTwoPi, kTwoPi);
    Metric m = conformal_from(g, FourierSeries::random(11, 4, 0.4));
    sink.add("total_curvature_zero", 0, std::abs(integrate(m, gauss_curvature(m))),
             1e-12);
  }
  // u = 0.1 cos x: K = 0.1 cos x e^{-0.2 cos x}, Lap of sin-profile closed form.
  auto curvature_err = [](int n) {
    GridSpec g = make_grid(n, kTwoPi, kTwoPi);
    Metric m = conformal_from(g, one_mode(1, 0.1));
    ScalarField K = gauss_curvature(m);
    double worst = 0.0;
    auto xs = grid_points(g);
    for (int i = 0; i < n; ++i) {
      double exact = 0.1 * std::cos(xs[i]) * std::exp(-0.2 * std::cos(xs[i]));
      worst = std::max(worst, std::abs(K.v[i] - exact));
    }
    return worst;
  };
  double k256 = curvature_err(256), k512 = curvature_err(512);
  sink.add("conformal_curvature", 0, k256, 1e-5);
  sink.add("conformal_curvature_order", 0, std::abs(k256 / k512 - 4.0), 0.5);

  auto laplacian_err = [](int n) {
    GridSpec g = make_grid(n, kTwoPi, kTwoPi);
    Metric m = conformal_from(g, one_mode(1, 0.1));
    ScalarField f = sample_scalar(g, [](double x) { return std::cos(x); });
    ScalarField lap = laplace_beltrami(m, f);
    double worst = 0.0;
    auto xs = grid_points(g);
    for (int i = 0; i < n; ++i) {
      // Lap f = e^{-2u} f'' for x-only conformal profiles
      double exact = -std::cos(xs[i]) * std::exp(-0.2 * std::cos(xs[i]));
      worst = std::max(worst, std::abs(lap.v[i] - exact));
    }
    return worst;
  };
  double l256 = laplacian_err(256), l512 = laplacian_err(512);
  sink.add("laplacian_conformal", 0, l256, 8e-5);
  sink.add("laplacian_conformal_order", 0, std::abs(l256 / l512 - 4.0), 0.5);

  // Contracted Bianchi, 2-D form: Div(K g) = dK.
  auto bianchi_err = [](int n) {
    GridSpec g = make_grid(n, kTwoPi, kTwoPi);
    Metric m = conformal_from(g, one_mode(1, 0.1));
    ScalarField K = gauss_curvature(m);
    VectorField dv = divergence(m, ricci_tensor(m));
    VectorField dk = gradient(m, K);
    // compare the lowered forms: Div(Kg)_x vs (dK)_x = a * grad^x
    double worst = 0.0;
    for (size_t i = 0; i < dv.x.size(); ++i) {
      double rhs = m.a[i] * dk.x[i];
      worst = std::max(worst, std::abs(dv.x[i] - rhs));
      worst = std::max(worst, std::abs(dv.y[i]));
    }
    return worst;
  };
  double b256 = bianchi_err(256), b512 = bianchi_err(512);
  sink.add("bianchi_contracted", 0, b256, 1e-4);
  sink.add("bianchi_contracted_order", 0, std::abs(b256 / b512 - 4.0), 0.5);

  auto ibp_err = [](int n) {
    GridSpec g = make_grid(n, kTwoPi, kTwoPi);
    Metric m = conformal_from(g, FourierSeries::random(12, 4, 0.4));
    ScalarField f = sample(g, FourierSeries::random(13, 3, 0.5));
    ScalarField w = sample(g, FourierSeries::random(14, 3, 0.5));
    ScalarField lap = laplace_beltrami(m, f);
    ScalarField prod{g, std::vector<double>(static_cast<size_t>(n))};
    ScalarField cross = inner_grad(m, f, w);
    for (int i = 0; i < n; ++i)
      prod.v[static_cast<size_t>(i)] =
          lap.v[static_cast<size_t>(i)] * w.v[static_cast<size_t>(i)] +
          cross.v[static_cast<size_t>(i)];
    return std::abs(integrate(m, prod));
  };
  double i256 = ibp_err(256), i512 = ibp_err(512);
  sink.add("integration_by_parts", 0, i256, 2e-3);
  sink.add("integration_by_parts_order", 0, std::abs(i256 / i512 - 4.0), 0.5);
}

// ------------------------------------------------------------------- flows

double ricci_theta_sup(int n, uint64_t seed) {
  FlowState s = pinned_state("ricci", n, 0.0);
  ScalarField bmda = b_minus_delta_a_closed(s);
  double worst = 0.0;
  for (int j = 0; j < 10; ++j) {
    uint64_t base = 100 + 2 * static_cast<uint64_t>(j) + 1000 * seed;
    VectorField V = sample_vector(s.metric.grid, FourierSeries::random(base, 3, 1.0),
                                  FourierSeries::random(base + 1, 3, 1.0));
    worst = std::max(worst, max_abs(theta_general(s, V, bmda).v));
  }
  return worst;
}

FlowState dual_state(const std::string& which, int n) {
  GridSpec grid = make_grid(n, kTwoPi, kTwoPi);
  Metric g = conformal_from(grid, one_mode(1, 0.1));
  ScalarField v = sample_scalar(grid, [](double x) {
    return 0.3 * std::sin(x) + 0.08 * std::cos(2.0 * x);
  });
  if (which == "list") return make_flow_state(FlowKind::list_extended(1.0), 0.0, g, v);
  return make_flow_state(FlowKind::ricci_harmonic(1.2, 0.6), 0.25, g, v);
}

double theta_dual_sup(const std::string& which, int n, uint64_t seed) {
  FlowState s = dual_state(which, n);
  ScalarField bmda = b_minus_delta_a_closed(s);
  uint64_t base = 200 + 1000 * seed;
  VectorField V = sample_vector(s.metric.grid, FourierSeries::random(base, 3, 1.0),
                                FourierSeries::random(base + 1, 3, 1.0));
  ScalarField gen = theta_general(s, V, bmda);
  ScalarField clo = theta_closed(s, V);
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(gen.v[static_cast<size_t>(i)] -
                                     clo.v[static_cast<size_t>(i)]));
  return worst;
}

double bmda_dual_sup(const std::string& which, int n) {
  FlowState probe = dual_state(which, n);
  FlowState s0 = make_flow_state(probe.kind, 0.0, probe.metric, probe.aux);
  double dt = 5e-4 * (64.0 * 64.0) / (static_cast<double>(n) * n);
  FlowTrajectory traj = evolve(s0, dt, 8.0 * dt);
  ScalarField num = b_minus_delta_a_numeric(traj, 8);
  ScalarField clo = b_minus_delta_a_closed(traj.half(8));
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(num.v[static_cast<size_t>(i)] -
                                     clo.v[static_cast<size_t>(i)]));
  return worst;
}

void flows_checks(Sink& sink, uint64_t seed) {
  double t256 = ricci_theta_sup(256, seed), t512 = ricci_theta_sup(512, seed);
  sink.add("ricci_theta_vanishing", 2, t256, 1e-3);
  sink.add("ricci_theta_vanishing_order", 2, std::abs(t256 / t512 - 4.0), 0.5);

  for (const std::string which : {"list", "rh"}) {
    double d256 = theta_dual_sup(which, 256, seed), d512 = theta_dual_sup(which, 512, seed);
    sink.add("theta_dual_" + which, 3, d256, 1e-3);
    sink.add("theta_dual_" + which + "_order", 3, std::abs(d256 / d512 - 4.0), 0.5);
    double m256 = bmda_dual_sup(which, 256), m512 = bmda_dual_sup(which, 512);
    sink.add("bmda_dual_" + which, 3, m256, 1e-3);
    sink.add("bmda_dual_" + which + "_order", 3, std::abs(m256 / m512 - 4.0), 0.5);
  }

  {
    double worst = -std::numeric_limits<double>::infinity();
    for (const std::string which : {"list", "rh"}) {
      FlowState s = dual_state(which, 128);
      for (int j = 0; j < 3; ++j) {
        uint64_t base = 300 + 2 * static_cast<uint64_t>(j) + 1000 * seed;
        VectorField V = sample_vector(s.metric.grid,
                                      FourierSeries::random(base, 3, 1.0),
                                      FourierSeries::random(base + 1, 3, 1.0));
        worst = std::max(worst, -min_value(theta_closed(s, V).v));
      }
      worst = std::max(worst, -min_value(b_minus_delta_a_closed(s).v));
    }
    sink.add("closed_forms_nonnegative", 3, worst, 0.0);
  }

  {
    FlowTrajectory traj = pinned_trajectory("list", 128, 0.24);
    int stride = 8;
    double worst = 0.0;
    for (int j = stride; j + stride < traj.full_count(); j += stride) {
      double vp = volume(traj.full(j + stride).metric);
      double vm = volume(traj.full(j - stride).metric);
      double fd = (vp - vm) / (traj.full(j + stride).time - traj.full(j - stride).time);
      const FlowState& s = traj.full(j);
      double int_a = integrate(s.metric, trace_a(s));
      worst = std::max(worst, std::abs(fd + int_a) / std::max(1.0, std::abs(int_a)));
    }
    sink.add("volume_identity", 10, worst, 1e-3);
  }

  {
    // Step-halving error ratio for the metric integrator (5th order local).
    GridSpec g = make_grid(16, kTwoPi, kTwoPi);
    Metric m0 = conformal_from(g, one_mode(1, 0.2));
    ScalarField v0 = sample(g, one_mode(1, 0.0, 0.5));
    auto final_a = [&](double dt) {
      FlowState s0 = make_flow_state(FlowKind::list_extended(1.0), 0.0, m0, v0);
      return evolve(s0, dt, 0.4).states.back().metric.a;
    };
    auto a1 = final_a(0.04), a2 = final_a(0.02), a3 = final_a(0.01);
    double e12 = 0.0, e23 = 0.0;
    for (size_t i = 0; i < a1.size(); ++i) {
      e12 = std::max(e12, std::abs(a1[i] - a2[i]));
      e23 = std::max(e23, std::abs(a2[i] - a3[i]));
    }
    sink.add("integrator_order", 0, std::abs(e12 / e23 - 17.0), 5.0);
  }
}

// -------------------------------------------------------------------- heat

void heat_checks(Sink& sink, uint64_t) {
  {
    double worst = 0.0;
    int least_steps = 1 << 30;
    for (const std::string which : {"static", "ricci", "list", "rh"}) {
      Bundle b = pinned_run(which, 64, 0.5);
      least_steps = std::min(least_steps, b.traj.full_count() - 1);
      for (int j = 0; j < b.traj.full_count(); ++j) {
        double m = integrate(b.traj.full(j).metric, b.heat.u[static_cast<size_t>(j)]);
        worst = std::max(worst, std::abs(m - b.heat.mass) / std::abs(b.heat.mass));
      }
    }
    if (least_steps < 200)
      throw ConfigError("mass fixture shorter than 200 steps");
    sink.add("mass_conservation", 10, worst, 1e-8);
  }

  {
    // Flat static background: the solver must reproduce the semidiscrete
    // symbol exactly up to time-stepping error.
    GridSpec g = make_grid(64, kTwoPi, kTwoPi);
    FlowState s0 = make_flow_state(FlowKind::static_metric(), 0.0, flat_metric(g));
    double dt = 1e-3;
    double T = 0.5;
    FlowTrajectory traj = evolve(s0, dt, T);
    ScalarField terminal = sample_scalar(g, [&](double x) {
      return 1.0 + 0.5 * std::cos(x);
    });
    HeatSolution heat = solve_backward(traj, terminal, false);
    double h = g.dx();
    double mu = (2.0 - 2.0 * std::cos(h)) / (h * h);
    double worst = 0.0;
    auto xs = grid_points(g);
    for (int j = 0; j < traj.full_count(); ++j) {
      double t = traj.full(j).time;
      for (int i = 0; i < g.n; ++i) {
        double exact = 1.0 + 0.5 * std::exp(-mu * (T - t)) * std::cos(xs[i]);
        worst = std::max(worst,
                         std::abs(heat.u[static_cast<size_t>(j)].v[static_cast<size_t>(i)] - exact));
      }
    }
    sink.add("semidiscrete_exact", 0, worst, 1e-9);
  }

  {
    GridSpec g = make_grid(32, kTwoPi, kTwoPi);
    Metric m0 = conformal_from(g, one_mode(1, 0.15));
    ScalarField terminal = sample_scalar(g, [](double x) {
      return std::exp(0.3 * std::cos(x));
    });
    auto u_at_zero = [&](double dt) {
      FlowState s0 = make_flow_state(FlowKind::ricci(), 0.0, m0);
      FlowTrajectory traj = evolve(s0, dt, 0.32);
      return solve_backward(traj, terminal, true).u.front().v;
    };
    auto u1 = u_at_zero(0.02), u2 = u_at_zero(0.01), u3 = u_at_zero(0.005);
    double e12 = 0.0, e23 = 0.0;
    for (size_t i = 0; i < u1.size(); ++i) {
      e12 = std::max(e12, std::abs(u1[i] - u2[i]));
      e23 = std::max(e23, std::abs(u2[i] - u3[i]));
    }
    sink.add("heat_time_order", 0, std::abs(e12 / e23 - 17.0), 5.0);
  }
}

// ----------------------------------------------------------------- entropy

struct SeriesMax {
  double e1 = 0.0, e2 = 0.0, dF = 0.0, f_mono = -std::numeric_limits<double>::infinity();
  double au = 0.0;
};

SeriesMax series_residuals(const std::string& which, const EntropySeries& es,
                           const Bundle& b) {
  SeriesMax r;
  size_t rows = es.t.size();
  for (size_t i = 1; i + 1 < rows; ++i) {
    double span = es.t[i + 1] - es.t[i - 1];
    double fd1 = (es.E[i + 1] - es.E[i - 1]) / span;
    double fd2 = (es.E1[i + 1] - es.E1[i - 1]) / span;
    r.e1 = std::max(r.e1, rel_against(es.E1[i] - fd1, fd1));
    r.e2 = std::max(r.e2, rel_against(es.E2[i] - fd2, fd2));
    for (size_t ki = 0; ki < es.k_list.size(); ++ki) {
      double fdk = (es.F[ki][i + 1] - es.F[ki][i - 1]) / span;
      r.dF = std::max(r.dF, rel_against(es.dF[ki][i] - fdk, fdk));
    }
  }
  for (size_t ki = 0; ki < es.k_list.size(); ++ki) {
    bool in_scope = (which == "ricci") ? es.k_list[ki] == 1.0 : es.k_list[ki] > 1.0;
    if (!in_scope) continue;
    for (size_t i = 0; i + 1 < rows; ++i)
      r.f_mono = std::max(r.f_mono, -(es.F[ki][i + 1] - es.F[ki][i]));
  }
  int mid = b.traj.full_count() / 2;
  auto [centered, formula] = au_identity(b.traj, b.heat, mid);
  r.au = rel_against(centered - formula, formula, 1.0);
  return r;
}

void entropy_checks(Sink& sink, uint64_t) {
  {
    // Closed-form shrinking sphere: E'' and the constancy of W at the soliton
    // reference time.
    double worst = 0.0;
    const double logW = std::log(2.0) - 1.0;
    for (int i = 0; i <= 9; ++i) {
      double t = 0.05 * i;
      SphereState st = sphere_flow(1.0, 2, unit_sphere_volume(2), t);
      SphereReport rep = sphere_reports(st, t, 0.25, 2.0, 0.5);
      if (i == 0) worst = std::max(worst, std::abs(rep.E2 - 4.0));
      worst = std::max(worst, std::abs(rep.W - logW));
      worst = std::max(worst, std::abs(rep.dW));
    }
    sink.add("sphere_oracle_entropy", 1, worst, 1e-10);
  }

  {
    SeriesMax agg;
    double au_worst = 0.0;
    for (const std::string which : {"ricci", "list", "rh"}) {
      Bundle b = pinned_run(which, 256, 0.3);
      SeriesSpec spec;
      spec.stride = 20;
      EntropySeries es = build_series(b.traj, b.heat, spec);
      SeriesMax r = series_residuals(which, es, b);
      agg.e1 = std::max(agg.e1, r.e1);
      agg.e2 = std::max(agg.e2, r.e2);
      agg.dF = std::max(agg.dF, r.dF);
      agg.f_mono = std::max(agg.f_mono, r.f_mono);
      au_worst = std::max(au_worst, r.au);
    }
    sink.add("entropy_first_derivative", 4, agg.e1, 1e-2);
    sink.add("entropy_second_derivative", 4, agg.e2, 1e-2);
    sink.add("f_derivative", 5, agg.dF, 1e-2);
    sink.add("f_monotone", 5, agg.f_mono, 1e-6);
    sink.add("au_identity", 5, au_worst, 1e-3);
  }

  {
    GridSpec g = make_grid(256, kTwoPi, kTwoPi);
    FlowState s0 = make_flow_state(FlowKind::static_metric(), 0.0, flat_metric(g));
    double dt = auto_dt(stable_dt(s0, 1.0), 1.0);
    FlowTrajectory traj = evolve(s0, dt, 1.0);
    ScalarField terminal = sample_scalar(g, [](double x) {
      return std::exp(0.3 * std::cos(x));
    });
    HeatSolution heat = solve_backward(traj, terminal, true);
    std::vector<double> E(heat.u.size());
    for (size_t j = 0; j < heat.u.size(); ++j)
      E[j] = entropy_E(traj.full(static_cast<int>(j)).metric, heat.u[j]);
    double worst = -std::numeric_limits<double>::infinity();
    for (size_t j = 1; j + 1 < E.size(); ++j)
      worst = std::max(worst, -(E[j + 1] - 2.0 * E[j] + E[j - 1]));
    sink.add("static_entropy_convex", 4, worst, 1e-8);
  }

  {
    Bundle b = pinned_run("ricci", 128, 0.6);
    SeriesSpec spec;
    spec.stride = 10;
    spec.T_ref = 0.7;
    EntropySeries es = build_series(b.traj, b.heat, spec);
    double fd_worst = 0.0, mono = -std::numeric_limits<double>::infinity();
    for (size_t i = 1; i + 1 < es.t.size(); ++i) {
      double fd = (es.W[i + 1] - es.W[i - 1]) / (es.t[i + 1] - es.t[i - 1]);
      fd_worst = std::max(fd_worst, rel_against(es.dW[i] - fd, fd));
    }
    for (size_t i = 0; i + 1 < es.t.size(); ++i)
      mono = std::max(mono, -(es.W[i + 1] - es.W[i]));
    sink.add("w_derivative", 6, fd_worst, 1e-2);
    sink.add("w_monotone", 6, mono, 1e-6);
  }

  {
    Bundle b = pinned_run("ricci", 128, 2.0);
    SeriesSpec spec;
    spec.stride = 20;
    spec.T_plus_ref = 0.0;
    EntropySeries es = build_series(b.traj, b.heat, spec);
    double fd_worst = 0.0, mono = -std::numeric_limits<double>::infinity();
    for (size_t i = 1; i + 1 < es.t.size(); ++i) {
      if (es.t[i - 1] < 0.2) continue;
      double fd = (es.Wp[i + 1] - es.Wp[i - 1]) / (es.t[i + 1] - es.t[i - 1]);
      fd_worst = std::max(fd_worst, rel_against(es.dWp[i] - fd, fd));
    }
    for (size_t i = 0; i + 1 < es.t.size(); ++i) {
      if (es.t[i] < 0.2) continue;
      mono = std::max(mono, -(es.Wp[i + 1] - es.Wp[i]));
    }
    sink.add("w_plus_derivative", 6, fd_worst, 1e-2);
    sink.add("w_plus_monotone", 6, mono, 1e-6);
  }
}

// ---------------------------------------------------------------- spectrum

ScalarField general_rate_integrand(const FlowState& s, const EigenResult& eig, double c) {
  LogFields lf = log_fields(s.metric, eig.f);
  TensorField al = alpha(s);
  TensorField diff = tensor_add(al, tensor_scale(lf.hess, 2.0), -1.0);
  ScalarField nsq = tensor_norm_sq(s.metric, diff);
  ScalarField asq = tensor_norm_sq(s.metric, al);
  VectorField V = gradient(s.metric, lf.log_u);
  for (auto& x : V.x) x *= 2.0;
  for (auto& x : V.y) x *= 2.0;
  ScalarField th = theta_general(s, V, b_minus_delta_a_closed(s));
  ScalarField bm = b_minus_delta_a_closed(s);
  ScalarField out{s.metric.grid, std::vector<double>(eig.f.v.size())};
  for (size_t i = 0; i < out.v.size(); ++i) {
    double f2 = eig.f.v[i] * eig.f.v[i];
    out.v[i] = 0.5 *
               (nsq.v[i] + (4.0 * c - 1.0) * asq.v[i] + th.v[i] +
                0.5 * (4.0 * c - 1.0) * bm.v[i]) *
               f2;
  }
  return out;
}

ScalarField flow_rate_integrand(const FlowState& s, const EigenResult& eig, double c) {
  LogFields lf = log_fields(s.metric, eig.f);
  TensorField al = alpha(s);
  TensorField diff = tensor_add(al, tensor_scale(lf.hess, 2.0), -1.0);
  ScalarField nsq = tensor_norm_sq(s.metric, diff);
  ScalarField asq = tensor_norm_sq(s.metric, al);
  ScalarField out{s.metric.grid, std::vector<double>(eig.f.v.size())};
  if (s.kind.tag == FlowTag::Ricci) {
    for (size_t i = 0; i < out.v.size(); ++i) {
      double f2 = eig.f.v[i] * eig.f.v[i];
      out.v[i] = 0.5 * (nsq.v[i] + (4.0 * c - 1.0) * asq.v[i]) * f2;
    }
    return out;
  }
  double an = s.kind.coupling_at(s.time);
  ScalarField lap_v = laplace_beltrami(s.metric, s.aux);
  ScalarField cross = inner_grad(s.metric, s.aux, lf.log_u);
  for (size_t i = 0; i < out.v.size(); ++i) {
    double f2 = eig.f.v[i] * eig.f.v[i];
    double sq = lap_v.v[i] + 2.0 * cross.v[i];
    out.v[i] = (0.5 * nsq.v[i] + (2.0 * c - 0.5) * asq.v[i] +
                0.5 * an * (sq * sq + (4.0 * c - 1.0) * lap_v.v[i] * lap_v.v[i])) *
               f2;
  }
  return out;
}

void spectrum_checks(Sink& sink, uint64_t) {
  {
    SphereState st = sphere_flow(1.0, 2, unit_sphere_volume(2), 0.0);
    SphereReport rep = sphere_reports(st, 0.0, 0.25, 2.0, 0.5);
    double worst = std::max(std::abs(rep.lam - 0.5), std::abs(rep.lam_prime - 1.0));
    sink.add("sphere_oracle_spectrum", 1, worst, 1e-10);
  }

  {
    GridSpec g = make_grid(64, kTwoPi, kTwoPi);
    Metric m = random_ab_metric(g, 61, 62, 0.3);
    ScalarField A = scalar_curvature(m);
    double lam = lowest_eigenpair(m, A, 0.5).lam;
    double dense = dense_lowest_eigenvalue(m, A, 0.5);
    sink.add("dense_oracle", 8, std::abs(lam - dense), 1e-8);

    Metric mc = conformal_from(g, one_mode(1, 0.1));
    ScalarField Ac = scalar_curvature(mc);
    double l1 = lowest_eigenpair(mc, Ac, 0.5).lam;
    double l2 = lowest_eigenvalue_2d(mc, Ac, 0.5, 16);
    sink.add("assembly_2d", 8, std::abs(l2 - l1), 1e-6);
  }

  {
    double worst = 0.0;
    for (const std::string which : {"ricci", "list"}) {
      FlowTrajectory traj = pinned_trajectory(which, 256, 0.3);
      int m = 20, mid = traj.full_count() / 2;
      const FlowState& sm = traj.full(mid - m);
      const FlowState& s0 = traj.full(mid);
      const FlowState& sp = traj.full(mid + m);
      for (double c : {0.25, 0.5, 1.0}) {
        EigenOptions opt;
        EigenResult em = lowest_eigenpair(sm.metric, trace_a(sm), c, opt);
        opt.start = em.f.v;
        EigenResult e0 = lowest_eigenpair(s0.metric, trace_a(s0), c, opt);
        opt.start = e0.f.v;
        EigenResult ep = lowest_eigenpair(sp.metric, trace_a(sp), c, opt);
        double fd = (ep.lam - em.lam) / (sp.time - sm.time);
        double lp = lambda_prime_formula(s0, e0, c, b_minus_delta_a_closed(s0));
        worst = std::max(worst, rel_against(lp - fd, fd));
      }
    }
    sink.add("lambda_prime_fd", 8, worst, 1e-2);
  }

  {
    double worst_sup = 0.0, worst_wire = 0.0;
    for (const std::string which : {"ricci", "list"}) {
      FlowState s = pinned_state(which, 256, 0.0);
      EigenResult eig = lowest_eigenpair(s.metric, trace_a(s), 0.5);
      ScalarField gen = general_rate_integrand(s, eig, 0.5);
      ScalarField spec = flow_rate_integrand(s, eig, 0.5);
      double sup = 0.0;
      for (size_t i = 0; i < gen.v.size(); ++i)
        sup = std::max(sup, std::abs(gen.v[i] - spec.v[i]));
      worst_sup = std::max(worst_sup, sup);
      double lib = lambda_prime_formula(s, eig, 0.5, b_minus_delta_a_closed(s));
      worst_wire = std::max(worst_wire, rel_against(integrate(s.metric, gen) - lib, lib));
      double lib2 = lambda_prime_flow_form(s, eig, 0.5);
      worst_wire = std::max(worst_wire,
                            rel_against(integrate(s.metric, spec) - lib2, lib2));
    }
    sink.add("flow_form_integrand", 8, worst_sup, 1e-3);
    sink.add("flow_form_wiring", 8, worst_wire, 1e-10);
  }

  {
    auto lemma_worst = [](int n) {
      GridSpec g = make_grid(n, kTwoPi, kTwoPi);
      std::vector<Metric> ms;
      ms.push_back(flat_metric(g));
      ms.push_back(conformal_from(g, one_mode(1, 0.1)));
      ms.push_back(conformal_from(g, FourierSeries::random(31, 4, 0.3)));
      ms.push_back(random_ab_metric(g, 41, 42, 0.2));
      ms.push_back(conformal_from(g, one_mode(2, 0.15)));
      std::vector<FourierSeries> profiles{
          one_mode(1, 0.3), one_mode(1, 0.0, 0.25), FourierSeries::random(33, 3, 0.35),
          FourierSeries::random(43, 3, 0.3), one_mode(2, 0.12, 0.06)};
      std::vector<double> res;
      for (size_t p = 0; p < ms.size(); ++p) {
        ScalarField f{g, exp_of(sample(g, profiles[p]))};
        auto [lhs, rhs] = lemma_ibp_identity(ms[p], f, 0.7);
        res.push_back(std::abs(lhs - rhs));
      }
      return res;
    };
    auto r256 = lemma_worst(256), r512 = lemma_worst(512);
    double worst = *std::max_element(r256.begin(), r256.end());
    sink.add("lemma_ibp", 7, worst, 1e-3);
    double worst_ratio = 0.0;
    for (size_t p = 0; p < r256.size(); ++p)
      worst_ratio = std::max(worst_ratio, std::abs(r256[p] / r512[p] - 4.0));
    sink.add("lemma_ibp_order", 7, worst_ratio, 0.5);
  }

  {
    GridSpec g = make_grid(128, kTwoPi, kTwoPi);
    Metric m = conformal_from(g, one_mode(1, 0.1));
    ScalarField A = scalar_curvature(m);
    EigenResult base = lowest_eigenpair(m, A, 0.25);
    double nb = normalized_lambda(m, base.lam, 2);
    double worst = 0.0;
    for (double eps : {0.5, 2.0, 10.0}) {
      Metric sm = m;
      for (auto& x : sm.a) x *= eps;
      for (auto& x : sm.b) x *= eps;
      ScalarField As = scalar_curvature(sm);
      EigenResult es = lowest_eigenpair(sm, As, 0.25);
      worst = std::max(worst, std::abs(normalized_lambda(sm, es.lam, 2) - nb) / std::abs(nb));
    }
    sink.add("scale_invariance", 9, worst, 1e-10);

    LogFields lf = log_fields(m, base.f);
    ScalarField S{g, std::vector<double>(A.v.size())};
    ScalarField lap_logf = laplace_beltrami(m, lf.log_u);
    ScalarField integrand{g, std::vector<double>(A.v.size())};
    for (size_t i = 0; i < S.v.size(); ++i) {
      S.v[i] = A.v[i] - 2.0 * lap_logf.v[i];
      integrand.v[i] = S.v[i] * base.f.v[i] * base.f.v[i];
    }
    double holder = std::abs(integrate(m, integrand) - 4.0 * base.lam) /
                    std::max(1.0, std::abs(4.0 * base.lam));
    sink.add("holder_identity", 9, holder, 1e-3);
  }

  {
    FlowTrajectory traj = pinned_trajectory("ricci", 128, 0.3);
    int stride = 15;
    std::vector<double> ts, lbar, lower;
    EigenOptions opt;
    for (int j = 0; j < traj.full_count(); j += stride) {
      const FlowState& s = traj.full(j);
      EigenResult e = lowest_eigenpair(s.metric, trace_a(s), 0.25, opt);
      opt.start = e.f.v;
      ts.push_back(s.time);
      lbar.push_back(normalized_lambda(s.metric, e.lam, 2));
      lower.push_back(
          lambda_bar_lower_bound(s, e, 0.25, b_minus_delta_a_closed(s)).lower_bound);
      if (e.lam > 0.0) throw ConfigError("lambda fixture lost nonpositivity");
    }
    double worst_rate = -std::numeric_limits<double>::infinity();
    double worst_gap = -std::numeric_limits<double>::infinity();
    for (size_t i = 1; i + 1 < ts.size(); ++i) {
      double fd = (lbar[i + 1] - lbar[i - 1]) / (ts[i + 1] - ts[i - 1]);
      worst_rate = std::max(worst_rate, -fd);
      worst_gap = std::max(worst_gap, lower[i] - fd);
    }
    sink.add("lambda_bar_rate", 9, worst_rate, 1e-4);
    sink.add("lambda_bar_bound", 9, worst_gap, 1e-4);
  }
}

}  // namespace

std::vector<CheckResult> run_checks(const std::string& suite, double tol_scale,
                                    uint64_t seed) {
  if (suite != "geometry" && suite != "flows" && suite != "heat" &&
      suite != "entropy" && suite != "spectrum" && suite != "all")
    throw ConfigError("unknown verify suite: " + suite);
  std::vector<CheckResult> out;
  auto want = [&](const char* s) { return suite == "all" || suite == s; };
  if (want("geometry")) {
    Sink sink{out, "geometry", tol_scale};
    geometry_checks(sink, seed);
  }
  if (want("flows")) {
    Sink sink{out, "flows", tol_scale};
    flows_checks(sink, seed);
  }
  if (want("heat")) {
    Sink sink{out, "heat", tol_scale};
    heat_checks(sink, seed);
  }
  if (want("entropy")) {
    Sink sink{out, "entropy", tol_scale};
    entropy_checks(sink, seed);
  }
  if (want("spectrum")) {
    Sink sink{out, "spectrum", tol_scale};
    spectrum_checks(sink, seed);
  }
  return out;
}

}  // namespace flowlab::verify
