#include "flowlab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "flowlab/conjugate_heat.hpp"
#include "flowlab/entropy.hpp"
#include "flowlab/errors.hpp"
#include "flowlab/sphere.hpp"
#include "flowlab/spectrum.hpp"

#ifndef FLOWLAB_BUILD_ID
#define FLOWLAB_BUILD_ID "unknown"
#endif

namespace flowlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

std::vector<std::string> make_header(const std::vector<double>& k_list,
                                     const std::vector<double>& c_list) {
  std::vector<std::string> h{"t", "vol", "E", "E1_formula", "E1_fd", "E2_formula",
                             "E2_fd"};
  for (double k : k_list) h.push_back("F_k" + label(k));
  for (double k : k_list) h.push_back("dF_k" + label(k) + "_formula");
  h.insert(h.end(), {"W", "dW_formula", "Wplus", "dWplus_formula"});
  for (double c : c_list) h.push_back("lambda_c" + label(c));
  h.insert(h.end(), {"lambda_prime_formula", "lambda_prime_fd", "lambda_bar",
                     "min_theta", "min_bmda"});
  return h;
}

bool usable(double x) { return std::isfinite(x); }

std::vector<double> centered_fd(const std::vector<double>& t,
                                const std::vector<double>& y) {
  std::vector<double> out(y.size(), kNaN);
  for (size_t i = 1; i + 1 < y.size(); ++i)
    if (usable(y[i - 1]) && usable(y[i + 1]))
      out[i] = (y[i + 1] - y[i - 1]) / (t[i + 1] - t[i - 1]);
  return out;
}

// Three-point second derivative, valid for a nonuniform tail row.
std::vector<double> second_fd(const std::vector<double>& t,
                              const std::vector<double>& y) {
  std::vector<double> out(y.size(), kNaN);
  for (size_t i = 1; i + 1 < y.size(); ++i) {
    if (!usable(y[i - 1]) || !usable(y[i]) || !usable(y[i + 1])) continue;
    double h1 = t[i] - t[i - 1], h2 = t[i + 1] - t[i];
    out[i] = 2.0 * (y[i - 1] / (h1 * (h1 + h2)) - y[i] / (h1 * h2) +
                    y[i + 1] / (h2 * (h1 + h2)));
  }
  return out;
}

struct VerdictSink {
  std::vector<Verdict>& out;
  double scale;

  void add(const std::string& name, double measured, double tol) {
    double t = tol * scale;
    out.push_back({name, measured, t, measured <= t});
  }

  // max_i |formula - fd| / max(|fd|, floor) over rows where mask holds.
  void fd_match(const std::string& name, const std::vector<double>& formula,
                const std::vector<double>& fd, const std::vector<char>& mask,
                double tol = 1e-2, double floor = 1e-4) {
    double worst = -1.0;
    for (size_t i = 0; i < formula.size(); ++i) {
      if (!mask[i] || !usable(formula[i]) || !usable(fd[i])) continue;
      double r = std::abs(formula[i] - fd[i]) / std::max(std::abs(fd[i]), floor);
      worst = std::max(worst, r);
    }
    if (worst >= 0.0) add(name, worst, tol);
  }

  // Nondecreasing check: measured = -min forward difference (per unit time
  // when rate is set) over consecutive defined rows.
  void nondecreasing(const std::string& name, const std::vector<double>& t,
                     const std::vector<double>& y, double tol, bool rate = false) {
    double worst = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (size_t i = 0; i + 1 < y.size(); ++i) {
      if (!usable(y[i]) || !usable(y[i + 1])) continue;
      double d = y[i + 1] - y[i];
      if (rate) d /= (t[i + 1] - t[i]);
      worst = std::max(worst, -d);
      any = true;
    }
    if (any) add(name, worst, tol);
  }
};

int resolve_stride(int cfg_stride, int steps) {
  if (cfg_stride > 0) return cfg_stride;
  return std::max(1, static_cast<int>(std::ceil(steps / 400.0)));
}

ScalarField exp_sample(const GridSpec& g, const FourierSeries& f) {
  ScalarField s = sample(g, f);
  for (double& x : s.v) x = std::exp(x);
  return s;
}

void torus_run(const ExperimentConfig& cfg, RunReport& rep) {
  GridSpec grid = make_grid(cfg.grid_n, cfg.grid_len_x, cfg.grid_len_y);

  Metric g0 = flat_metric(grid);
  if (cfg.metric_preset == "conformal") {
    g0 = conformal_metric(sample(grid, cfg.metric_u));
  } else if (cfg.metric_preset == "ab") {
    g0 = make_metric(grid, exp_sample(grid, cfg.metric_log_a).v,
                     exp_sample(grid, cfg.metric_log_b).v);
  }

  FlowKind kind = FlowKind::static_metric();
  if (cfg.flow_kind == "ricci") kind = FlowKind::ricci();
  else if (cfg.flow_kind == "list") kind = FlowKind::list_extended(cfg.flow_a_n);
  else if (cfg.flow_kind == "rh") kind = FlowKind::ricci_harmonic(cfg.flow_a0, cfg.flow_decay);

  FlowState s0 = kind.has_aux()
                     ? make_flow_state(kind, 0.0, g0, sample(grid, cfg.aux_v))
                     : make_flow_state(kind, 0.0, g0);

  double dt = cfg.dt ? *cfg.dt : auto_dt(stable_dt(s0, cfg.t_end), cfg.t_end);
  int steps = static_cast<int>(std::llround(cfg.t_end / dt));
  if (steps > 2000000)
    throw ConfigError("time.dt makes more than 2e6 steps; raise it or shorten t_end");
  int stride = resolve_stride(cfg.stride, steps);

  FlowTrajectory traj = evolve(s0, dt, cfg.t_end);
  ScalarField terminal = exp_sample(grid, cfg.terminal_u);
  HeatSolution heat = solve_backward(traj, terminal, true);

  SeriesSpec spec;
  spec.k_list = cfg.k_list;
  if (cfg.t_ref_mode == "auto") spec.T_ref = cfg.t_end + dt;
  else if (cfg.t_ref_mode == "value") spec.T_ref = cfg.t_ref_value;
  spec.T_plus_ref = cfg.t_plus_ref;
  spec.stride = stride;
  spec.bmda_numeric = cfg.bmda_numeric;

  EntropySeries es = build_series(traj, heat, spec);
  SpectrumSeries ss = build_spectrum_series(traj, cfg.c_list, stride);
  size_t rows = es.t.size();

  rep.flow_name = kind.name();
  rep.grid_n = cfg.grid_n;
  rep.dt = dt;
  rep.steps = steps;
  rep.stride = stride;

  auto e1_fd = centered_fd(es.t, es.E);
  auto e2_fd = second_fd(es.t, es.E);
  auto lp_fd = centered_fd(ss.t, ss.lambda[0]);

  rep.header = make_header(cfg.k_list, cfg.c_list);
  auto& cols = rep.columns;
  cols.push_back(es.t);
  cols.push_back(es.vol);
  cols.push_back(es.E);
  cols.push_back(es.E1);
  cols.push_back(e1_fd);
  cols.push_back(es.E2);
  cols.push_back(e2_fd);
  for (const auto& f : es.F) cols.push_back(f);
  for (const auto& df : es.dF) cols.push_back(df);
  cols.push_back(es.W);
  cols.push_back(es.dW);
  cols.push_back(es.Wp);
  cols.push_back(es.dWp);
  for (const auto& lam : ss.lambda) cols.push_back(lam);
  cols.push_back(ss.lambda_prime);
  cols.push_back(lp_fd);
  cols.push_back(ss.lambda_bar);
  cols.push_back(es.min_theta);
  cols.push_back(es.min_bmda);

  VerdictSink sink{rep.verdicts, cfg.tol_scale};

  double mass_dev = 0.0;
  for (int j = 0; j < traj.full_count(); ++j) {
    double m = integrate(traj.full(j).metric, heat.u[static_cast<size_t>(j)]);
    mass_dev = std::max(mass_dev, std::abs(m - heat.mass) / std::abs(heat.mass));
  }
  sink.add("mass_conservation", mass_dev, 1e-8);

  std::vector<double> int_a(rows);
  for (size_t i = 0; i < rows; ++i) {
    const FlowState& s = traj.full(es.full_index[i]);
    int_a[i] = integrate(s.metric, trace_a(s));
  }
  auto vol_fd = centered_fd(es.t, es.vol);
  double vol_worst = -1.0;
  for (size_t i = 0; i < rows; ++i) {
    if (!usable(vol_fd[i])) continue;
    vol_worst = std::max(vol_worst,
                         std::abs(vol_fd[i] + int_a[i]) / std::max(1.0, std::abs(int_a[i])));
  }
  if (vol_worst >= 0.0) sink.add("volume_identity", vol_worst, 1e-3);

  std::vector<char> all(rows, 1);
  sink.fd_match("E1_fd_match", es.E1, e1_fd, all);
  sink.fd_match("E2_fd_match", es.E2, e2_fd, all);
  for (size_t ki = 0; ki < cfg.k_list.size(); ++ki)
    sink.fd_match("dF_k" + label(cfg.k_list[ki]) + "_fd_match", es.dF[ki],
                  centered_fd(es.t, es.F[ki]), all);
  sink.fd_match("lambda_prime_fd_match", ss.lambda_prime, lp_fd, all);

  double row_dt = stride * dt;
  if (spec.T_ref) {
    std::vector<char> win(rows, 0);
    for (size_t i = 0; i < rows; ++i)
      win[i] = (*spec.T_ref - es.t[i] >= 20.0 * row_dt) ? 1 : 0;
    sink.fd_match("dW_fd_match", es.dW, centered_fd(es.t, es.W), win);
  }
  if (spec.T_plus_ref) {
    std::vector<char> win(rows, 0);
    for (size_t i = 0; i < rows; ++i)
      win[i] = (es.t[i] - *spec.T_plus_ref >= 20.0 * row_dt) ? 1 : 0;
    sink.fd_match("dWplus_fd_match", es.dWp, centered_fd(es.t, es.Wp), win);
  }

  // Positivity of the flow's Theta and B - Lap A certifies the monotonicity
  // statements; check it where the closed forms promise it, then gate the
  // monotonicity verdicts on the measured minima.
  double slack = 1e-6 * cfg.tol_scale;
  double theta_min = *std::min_element(es.min_theta.begin(), es.min_theta.end());
  double bmda_min = *std::min_element(es.min_bmda.begin(), es.min_bmda.end());
  if (cfg.flow_kind != "static") {
    sink.add("theta_nonneg", -theta_min, 1e-6);
    sink.add("bmda_nonneg", -bmda_min, 1e-6);
  }
  bool theta_ok = theta_min >= -slack;
  bool bmda_ok = bmda_min >= -slack;
  if (theta_ok) {
    sink.nondecreasing("E1_nondecreasing", es.t, es.E1, 1e-6);
    double conv = -1.0;
    for (size_t i = 0; i < rows; ++i)
      if (usable(e2_fd[i])) conv = std::max(conv, -e2_fd[i] * row_dt * row_dt);
    if (conv > -1.0) sink.add("E_convexity", conv, 1e-8);
    for (size_t ki = 0; ki < cfg.k_list.size(); ++ki) {
      if (cfg.k_list[ki] > 1.0 && !bmda_ok) continue;
      sink.nondecreasing("F_k" + label(cfg.k_list[ki]) + "_nondecreasing", es.t,
                         es.F[ki], 1e-6);
    }
    if (spec.T_ref) sink.nondecreasing("W_nondecreasing", es.t, es.W, 1e-6);
    if (spec.T_plus_ref)
      sink.nondecreasing("Wplus_nondecreasing", es.t, es.Wp, 1e-6);
    bool lam_nonpos = true;
    for (double lb : ss.lambda_bar) lam_nonpos = lam_nonpos && lb <= 0.0;
    if (lam_nonpos)
      sink.nondecreasing("lambda_bar_nondecreasing", ss.t, ss.lambda_bar, 1e-4, true);
  }
}

void sphere_run(const ExperimentConfig& cfg, RunReport& rep) {
  double vol_unit = unit_sphere_volume(cfg.sphere_dim);
  double dt = cfg.dt ? *cfg.dt : cfg.t_end / 400.0;
  int steps = static_cast<int>(std::llround(cfg.t_end / dt));
  int stride = resolve_stride(cfg.stride, steps);

  double T_ref = kNaN;
  if (cfg.t_ref_mode == "auto") T_ref = cfg.t_end + dt;
  else if (cfg.t_ref_mode == "value") T_ref = cfg.t_ref_value;

  rep.flow_name = "ricci";
  rep.grid_n = 0;
  rep.dt = dt;
  rep.steps = steps;
  rep.stride = stride;

  size_t nk = cfg.k_list.size(), nc = cfg.c_list.size();
  std::vector<double> ts;
  for (int j = 0; j <= steps; j += stride) ts.push_back(j * dt);
  size_t rows = ts.size();

  std::vector<double> vol(rows), E(rows), E1(rows), E2(rows), W(rows), dW(rows),
      lp(rows), lbar(rows), Wp(rows, kNaN), dWp(rows, kNaN);
  std::vector<std::vector<double>> F(nk, std::vector<double>(rows));
  std::vector<std::vector<double>> dF(nk, std::vector<double>(rows));
  std::vector<std::vector<double>> lam(nc, std::vector<double>(rows));

  for (size_t i = 0; i < rows; ++i) {
    double t = ts[i];
    SphereState st = sphere_flow(cfg.sphere_s0, cfg.sphere_dim, vol_unit, t);
    double tref = usable(T_ref) ? T_ref : t;  // tau = 0 marks W undefined
    SphereReport base = sphere_reports(st, t, cfg.c_list[0], cfg.k_list[0], tref);
    vol[i] = base.vol;
    E[i] = base.E;
    E1[i] = base.E1;
    E2[i] = base.E2;
    W[i] = base.W;
    dW[i] = base.dW;
    lp[i] = base.lam_prime;
    lbar[i] = sphere_reports(st, t, 0.25, cfg.k_list[0], tref).lam_bar;
    for (size_t ki = 0; ki < nk; ++ki) {
      SphereReport rk = sphere_reports(st, t, cfg.c_list[0], cfg.k_list[ki], tref);
      F[ki][i] = rk.F_k;
      dF[ki][i] = cfg.k_list[ki] * rk.E2;
    }
    for (size_t ci = 0; ci < nc; ++ci)
      lam[ci][i] = sphere_reports(st, t, cfg.c_list[ci], cfg.k_list[0], tref).lam;
    if (cfg.t_plus_ref) {
      Wp[i] = sphere_w_plus(st, t, *cfg.t_plus_ref);
      dWp[i] = sphere_w_plus_derivative(st, t, *cfg.t_plus_ref);
    }
  }

  auto e1_fd = centered_fd(ts, E);
  auto e2_fd = second_fd(ts, E);
  auto lp_fd = centered_fd(ts, lam[0]);

  rep.header = make_header(cfg.k_list, cfg.c_list);
  auto& cols = rep.columns;
  cols.push_back(ts);
  cols.push_back(vol);
  cols.push_back(E);
  cols.push_back(E1);
  cols.push_back(e1_fd);
  cols.push_back(E2);
  cols.push_back(e2_fd);
  for (const auto& f : F) cols.push_back(f);
  for (const auto& df : dF) cols.push_back(df);
  cols.push_back(W);
  cols.push_back(dW);
  cols.push_back(Wp);
  cols.push_back(dWp);
  for (const auto& l : lam) cols.push_back(l);
  cols.push_back(lp);
  cols.push_back(lp_fd);
  cols.push_back(lbar);
  cols.push_back(std::vector<double>(rows, 0.0));
  cols.push_back(std::vector<double>(rows, 0.0));

  VerdictSink sink{rep.verdicts, cfg.tol_scale};
  std::vector<char> all(rows, 1);
  sink.fd_match("E1_fd_match", E1, e1_fd, all);
  sink.fd_match("E2_fd_match", E2, e2_fd, all);
  for (size_t ki = 0; ki < nk; ++ki)
    sink.fd_match("dF_k" + label(cfg.k_list[ki]) + "_fd_match", dF[ki],
                  centered_fd(ts, F[ki]), all);
  sink.fd_match("lambda_prime_fd_match", lp, lp_fd, all);

  double row_dt = stride * dt;
  if (usable(T_ref)) {
    std::vector<char> win(rows, 0);
    for (size_t i = 0; i < rows; ++i)
      win[i] = (T_ref - ts[i] >= 20.0 * row_dt) ? 1 : 0;
    sink.fd_match("dW_fd_match", dW, centered_fd(ts, W), win);
    sink.nondecreasing("W_nondecreasing", ts, W, 1e-6);
  }
  if (cfg.t_plus_ref) {
    sink.fd_match("dWplus_fd_match", dWp, centered_fd(ts, Wp), all);
    sink.nondecreasing("Wplus_nondecreasing", ts, Wp, 1e-6);
  }
  sink.nondecreasing("E1_nondecreasing", ts, E1, 1e-6);
  for (size_t ki = 0; ki < nk; ++ki)
    sink.nondecreasing("F_k" + label(cfg.k_list[ki]) + "_nondecreasing", ts, F[ki],
                       1e-6);

  auto vol_fd = centered_fd(ts, vol);
  double vol_worst = -1.0;
  for (size_t i = 0; i < rows; ++i) {
    if (!usable(vol_fd[i])) continue;
    SphereState st = sphere_flow(cfg.sphere_s0, cfg.sphere_dim, vol_unit, ts[i]);
    double int_a = st.scalar_curvature() * st.volume();
    vol_worst = std::max(vol_worst,
                         std::abs(vol_fd[i] + int_a) / std::max(1.0, int_a));
  }
  if (vol_worst >= 0.0) sink.add("volume_identity", vol_worst, 1e-3);
}

}  // namespace

bool RunReport::passed() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

double auto_dt(double stable, double t_end) {
  if (!(stable > 0.0) || !(t_end > 0.0))
    throw ConfigError("auto step needs positive stability bound and horizon");
  int steps = std::max(1, static_cast<int>(std::ceil(t_end / stable)));
  return t_end / steps;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  RunReport rep;
  rep.backend = cfg.backend;
  rep.config_echo = echo_config(cfg);
  rep.build_id = FLOWLAB_BUILD_ID;
  rep.out_csv = cfg.out_csv;
  rep.out_json = cfg.out_json;
  if (cfg.backend == "sphere") sphere_run(cfg, rep);
  else torus_run(cfg, rep);
  return rep;
}

}  // namespace flowlab
