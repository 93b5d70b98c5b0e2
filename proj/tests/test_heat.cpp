#include <cmath>
#include <vector>

#include "doctest.h"
#include "flowlab/conjugate_heat.hpp"
#include "flowlab/errors.hpp"
#include "flowlab/flows.hpp"
#include "flowlab/geometry.hpp"
#include "flowlab/grid.hpp"

using namespace flowlab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE("heat") {

TEST_CASE("mass is conserved across an evolving background") {
  auto g = make_grid(64, 2 * kPi, 2 * kPi);
  auto u0 = sample_scalar(g, [](double x) { return 0.2 * std::cos(x); });
  auto s0 = make_flow_state(FlowKind::ricci(), 0.0, conformal_metric(u0));
  double dt = stable_dt(s0, 0.5);
  int steps = static_cast<int>(std::ceil(0.5 / dt));
  auto tr = evolve(s0, 0.5 / steps, 0.5);
  auto term = sample_scalar(g, [](double x) { return std::exp(0.3 * std::cos(x)); });
  auto sol = solve_backward(tr, term);

  CHECK(sol.mass == doctest::Approx(1.0).epsilon(1e-14));  // normalized
  CHECK(static_cast<int>(sol.u.size()) == tr.full_count());
  double drift = 0;
  for (int j = 0; j < static_cast<int>(sol.u.size()); ++j) {
    drift = std::max(drift, std::fabs(integrate(tr.full(j).metric, sol.u[j]) - sol.mass));
    CHECK(sol.times[j] == doctest::Approx(tr.full(j).time).epsilon(1e-14));
    CHECK(min_value(sol.u[j].v) > 0.0);
  }
  CHECK(drift < 1e-12);  // measured 4.4e-16

  auto raw = solve_backward(tr, term, false);
  CHECK(raw.mass == doctest::Approx(integrate(tr.states.back().metric, term)).epsilon(1e-14));
}

TEST_CASE("flat static solve matches the semidiscrete exponential") {
  // Backward conjugate heat on a static flat torus is plain heat in the
  // reversed time; a single cosine mode decays with the stencil symbol.
  auto run = [](int n, double* semi_err) {
    auto g = make_grid(n, 2 * kPi, 2 * kPi);
    auto s0 = make_flow_state(FlowKind::static_metric(), 0.0, flat_metric(g));
    const double T = 0.5;
    double dt = 0.5 * g.dx() * g.dx();
    int steps = static_cast<int>(std::ceil(T / dt));
    auto tr = evolve(s0, T / steps, T);
    auto term = sample_scalar(g, [](double x) { return 1 + 0.5 * std::cos(x); });
    auto sol = solve_backward(tr, term, false);
    double h = g.dx();
    double mu = (2 - 2 * std::cos(h)) / (h * h);
    auto xs = grid_points(g);
    double es = 0, ec = 0;
    for (int i = 0; i < n; ++i) {
      es = std::max(es, std::fabs(sol.u[0].v[i] - (1 + 0.5 * std::exp(-mu * T) * std::cos(xs[i]))));
      ec = std::max(ec, std::fabs(sol.u[0].v[i] - (1 + 0.5 * std::exp(-T) * std::cos(xs[i]))));
    }
    *semi_err = es;
    return ec;
  };
  double s64, s128;
  double c64 = run(64, &s64), c128 = run(128, &s128);
  CHECK(s64 < 1e-11);   // measured 6.7e-13: time error only
  CHECK(s128 < 1e-11);  // measured 1.1e-15
  CHECK(c128 < 5e-5);   // measured 3.05e-5: spatial error
  CHECK(c64 / c128 > 3.5);
  CHECK(c64 / c128 < 4.5);
}

TEST_CASE("backward march is fourth order in time") {
  auto g = make_grid(16, 2 * kPi, 2 * kPi);
  auto s0 = make_flow_state(FlowKind::static_metric(), 0.0, flat_metric(g));
  auto term = sample_scalar(g, [](double x) { return 1 + 0.5 * std::cos(x); });
  const double T = 0.4;
  auto run = [&](double dt) {
    auto tr = evolve(s0, dt, T);
    return solve_backward(tr, term, false).u[0];
  };
  auto u1 = run(0.04), u2 = run(0.02), u3 = run(0.01);
  double d12 = 0, d23 = 0;
  for (int i = 0; i < g.n; ++i) {
    d12 = std::max(d12, std::fabs(u1.v[i] - u3.v[i]));
    d23 = std::max(d23, std::fabs(u2.v[i] - u3.v[i]));
  }
  CHECK(d12 / d23 > 12.0);  // measured 17.3
  CHECK(d12 / d23 < 22.0);
}

TEST_CASE("positivity loss aborts with the failure time") {
  auto g = make_grid(64, 2 * kPi, 2 * kPi);
  auto s0 = make_flow_state(FlowKind::static_metric(), 0.0, flat_metric(g));
  auto tr = evolve(s0, 0.05, 0.1);
  ScalarField term = make_scalar(g, 1.0);
  for (int i = 0; i < g.n; ++i) term.v[i] += 0.9 * ((i % 2 == 0) ? 1.0 : -1.0);
  bool thrown = false;
  try {
    solve_backward(tr, term);
  } catch (const NumericError& e) {
    thrown = true;
    CHECK(e.time >= 0.0);
    CHECK(e.time < 0.1);
  }
  CHECK(thrown);
}

TEST_CASE("terminal data is validated") {
  auto g = make_grid(32, 2 * kPi, 2 * kPi);
  auto s0 = make_flow_state(FlowKind::static_metric(), 0.0, flat_metric(g));
  auto tr = evolve(s0, 0.01, 0.1);
  CHECK_THROWS_AS(solve_backward(tr, make_scalar(g, 0.0)), ConfigError);
  CHECK_THROWS_AS(solve_backward(tr, make_scalar(g, -1.0)), ConfigError);
  auto other = make_scalar(make_grid(64, 2 * kPi, 2 * kPi), 1.0);
  CHECK_THROWS_AS(solve_backward(tr, other), ConfigError);
}

TEST_CASE("log field helper is consistent with the geometry kernels") {
  auto g = make_grid(64, 2 * kPi, 2 * kPi);
  auto w = sample_scalar(g, [](double x) { return 0.2 * std::cos(x); });
  auto m = conformal_metric(w);
  auto u = sample_scalar(g, [](double x) { return std::exp(0.3 * std::cos(x)); });
  auto lf = log_fields(m, u);
  auto xs = grid_points(g);
  for (int i = 0; i < g.n; ++i)
    CHECK(lf.log_u.v[i] == doctest::Approx(0.3 * std::cos(xs[i])).epsilon(1e-13));
  auto gsq = grad_norm_sq(m, lf.log_u);
  auto H = hessian(m, lf.log_u);
  for (int i = 0; i < g.n; ++i) {
    CHECK(lf.grad_sq.v[i] == gsq.v[i]);
    CHECK(lf.hess.xx[i] == H.xx[i]);
    CHECK(lf.hess.yy[i] == H.yy[i]);
  }
}

}  // TEST_SUITE
