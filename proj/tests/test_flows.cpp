#include <cmath>
#include <vector>

#include "doctest.h"
#include "flowlab/errors.hpp"
#include "flowlab/flows.hpp"
#include "flowlab/fourier.hpp"
#include "flowlab/geometry.hpp"
#include "flowlab/grid.hpp"

using namespace flowlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

Metric bump_metric(int n) {
  auto g = make_grid(n, 2 * kPi, 2 * kPi);
  auto u = sample_scalar(g, [](double x) { return 0.2 * std::cos(x); });
  return conformal_metric(u);
}

double max_diff_metric(const Metric& a, const Metric& b) {
  double e = 0;
  for (size_t i = 0; i < a.a.size(); ++i) {
    e = std::max(e, std::fabs(a.a[i] - b.a[i]));
    e = std::max(e, std::fabs(a.b[i] - b.b[i]));
  }
  return e;
}

}  // namespace

TEST_SUITE("flows") {

TEST_CASE("kind construction and coupling schedules") {
  CHECK_THROWS_AS(FlowKind::list_extended(0.0), ConfigError);
  CHECK_THROWS_AS(FlowKind::list_extended(-1.0), ConfigError);
  CHECK_THROWS_AS(FlowKind::ricci_harmonic(-0.5, 0.1), ConfigError);

  auto rh = FlowKind::ricci_harmonic(1.3, 0.9);
  CHECK(rh.coupling_at(0.3) == doctest::Approx(1.03).epsilon(1e-15));
  CHECK(rh.coupling_rate() == doctest::Approx(-0.9).epsilon(1e-15));
  auto li = FlowKind::list_extended(0.8);
  CHECK(li.coupling_at(5.0) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(li.coupling_rate() == 0.0);
  CHECK(li.has_aux());
  CHECK(!FlowKind::ricci().has_aux());
  CHECK(FlowKind::static_metric().name() == "static");
  CHECK(FlowKind::ricci().name() == "ricci");
  CHECK(li.name() == "list");
  CHECK(rh.name() == "rh");
}

TEST_CASE("state construction validates the coupled scalar") {
  auto m = bump_metric(32);
  auto v = make_scalar(m.grid, 0.1);
  CHECK_THROWS_AS(make_flow_state(FlowKind::list_extended(1.0), 0.0, m), ConfigError);
  CHECK_THROWS_AS(make_flow_state(FlowKind::ricci(), 0.0, m, v), ConfigError);
  CHECK_NOTHROW(make_flow_state(FlowKind::ricci(), 0.0, m));
  CHECK_NOTHROW(make_flow_state(FlowKind::list_extended(1.0), 0.0, m, v));
  // Coupling already non-positive at the start time.
  CHECK_THROWS_AS(make_flow_state(FlowKind::ricci_harmonic(0.5, 1.0), 1.0, m, v), ConfigError);
}

TEST_CASE("evolve validates the step layout") {
  auto s0 = make_flow_state(FlowKind::ricci(), 0.0, bump_metric(32));
  CHECK_THROWS_AS(evolve(s0, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(evolve(s0, 0.01, 0.0), ConfigError);
  CHECK_THROWS_AS(evolve(s0, 0.03, 0.1), ConfigError);  // 0.1/0.03 not whole
  auto tr = evolve(s0, 0.05, 0.2);
  CHECK(tr.full_count() == 5);
  CHECK(tr.half_count() == 9);
  CHECK(tr.t_begin() == 0.0);
  CHECK(tr.t_end() == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(tr.half(1).time == doctest::Approx(0.025).epsilon(1e-15));
  CHECK(tr.full(2).time == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("integrator is fourth order in time") {
  auto g = make_grid(16, 2 * kPi, 2 * kPi);
  auto u = sample_scalar(g, [](double x) { return 0.2 * std::cos(x); });
  auto v = sample_scalar(g, [](double x) { return 0.5 * std::sin(x); });
  auto s0 = make_flow_state(FlowKind::list_extended(1.0), 0.0, conformal_metric(u), v);
  const double T = 0.4;
  auto t1 = evolve(s0, 0.04, T);
  auto t2 = evolve(s0, 0.02, T);
  auto t3 = evolve(s0, 0.01, T);
  double d12 = max_diff_metric(t1.states.back().metric, t3.states.back().metric);
  double d23 = max_diff_metric(t2.states.back().metric, t3.states.back().metric);
  // (4^p - 1)/(2^p - 1) = 17 at p = 4; measured 17.6.
  CHECK(d12 / d23 > 12.0);
  CHECK(d12 / d23 < 22.0);
}

TEST_CASE("ricci flow preserves volume and flattens the torus") {
  auto s0 = make_flow_state(FlowKind::ricci(), 0.0, bump_metric(64));
  double dt = stable_dt(s0, 1.0);
  int steps = static_cast<int>(std::ceil(1.0 / dt));
  dt = 1.0 / steps;
  auto tr = evolve(s0, dt, 1.0);
  double v0 = volume(tr.full(0).metric);
  double v1 = volume(tr.states.back().metric);
  CHECK(std::fabs(v1 - v0) / v0 < 1e-13);  // measured 1.7e-16
  double k0 = max_abs(gauss_curvature(tr.full(0).metric).v);
  double k1 = max_abs(gauss_curvature(tr.states.back().metric).v);
  CHECK(k1 < 0.5 * k0);
  CHECK(std::fabs(integrate(tr.states.back().metric,
                            gauss_curvature(tr.states.back().metric))) < 1e-12);
}

TEST_CASE("static flow and flat ricci flow are exact fixed points") {
  auto s0 = make_flow_state(FlowKind::static_metric(), 0.0, bump_metric(32));
  auto tr = evolve(s0, 0.05, 0.5);
  CHECK(max_diff_metric(tr.full(0).metric, tr.states.back().metric) == 0.0);

  auto sf = make_flow_state(FlowKind::ricci(), 0.0, flat_metric(make_grid(32, 2 * kPi, 1.0)));
  auto tf = evolve(sf, 0.05, 0.5);
  CHECK(max_diff_metric(tf.full(0).metric, tf.states.back().metric) == 0.0);
}

TEST_CASE("zero decay reduces the harmonic variant to the list flow") {
  auto g = make_grid(32, 2 * kPi, 2 * kPi);
  auto u = sample_scalar(g, [](double x) { return 0.2 * std::cos(x); });
  auto v = sample_scalar(g, [](double x) { return 0.5 * std::sin(x); });
  auto sl = make_flow_state(FlowKind::list_extended(0.8), 0.0, conformal_metric(u), v);
  auto sr = make_flow_state(FlowKind::ricci_harmonic(0.8, 0.0), 0.0, conformal_metric(u), v);
  auto tl = evolve(sl, 0.01, 0.2);
  auto tr = evolve(sr, 0.01, 0.2);
  CHECK(max_diff_metric(tl.states.back().metric, tr.states.back().metric) == 0.0);
  for (size_t i = 0; i < tl.states.back().aux.v.size(); ++i)
    CHECK(tl.states.back().aux.v[i] == tr.states.back().aux.v[i]);
}

TEST_CASE("trace of alpha matches the closed form on a flat background") {
  auto run = [](int n) {
    auto g = make_grid(n, 2 * kPi, 2 * kPi);
    auto v = sample_scalar(g, [](double x) { return std::sin(x); });
    auto s = make_flow_state(FlowKind::list_extended(1.0), 0.0, flat_metric(g), v);
    auto A = trace_a(s);
    auto xs = grid_points(g);
    double e = 0;
    for (int i = 0; i < n; ++i)
      e = std::max(e, std::fabs(A.v[i] + std::cos(xs[i]) * std::cos(xs[i])));
    return e;
  };
  double e128 = run(128), e256 = run(256);
  CHECK(e256 < 3e-4);  // measured 2.01e-4
  CHECK(e128 / e256 > 3.5);
  CHECK(e128 / e256 < 4.5);

  auto s = make_flow_state(FlowKind::static_metric(), 0.0, bump_metric(32));
  CHECK(max_abs(trace_a(s).v) == 0.0);
}

TEST_CASE("assembled theta converges to the closed form") {
  auto run = [](int n, bool rh) {
    auto g = make_grid(n, 2 * kPi, 2 * kPi);
    auto u = sample_scalar(g, [](double x) { return 0.2 * std::cos(x); });
    auto v = sample_scalar(g, [](double x) { return 0.7 * std::sin(x) + 0.2 * std::cos(2 * x); });
    auto V = make_vector(g, 1.0, 0.5);
    auto s = rh ? make_flow_state(FlowKind::ricci_harmonic(1.3, 0.9), 0.3, conformal_metric(u), v)
                : make_flow_state(FlowKind::list_extended(1.3), 0.0, conformal_metric(u), v);
    auto tg = theta_general(s, V, b_minus_delta_a_closed(s));
    auto tc = theta_closed(s, V);
    double e = 0;
    for (int i = 0; i < n; ++i) e = std::max(e, std::fabs(tg.v[i] - tc.v[i]));
    return e;
  };
  double l128 = run(128, false), l256 = run(256, false);
  CHECK(l256 < 4e-3);  // measured 2.46e-3
  CHECK(l128 / l256 > 3.5);
  CHECK(l128 / l256 < 4.5);
  double r128 = run(128, true), r256 = run(256, true);
  CHECK(r256 < 3e-3);  // measured 1.94e-3
  CHECK(r128 / r256 > 3.5);
  CHECK(r128 / r256 < 4.5);
}

TEST_CASE("theta closed forms for the uncoupled kinds") {
  auto m = bump_metric(64);
  auto V = make_vector(m.grid, 1.0, 0.5);
  auto ss = make_flow_state(FlowKind::static_metric(), 0.0, m);
  auto tc = theta_closed(ss, V);
  auto rc = tensor_apply(ricci_tensor(m), V);
  for (int i = 0; i < m.grid.n; ++i) CHECK(tc.v[i] == rc.v[i]);
  auto sr = make_flow_state(FlowKind::ricci(), 0.0, m);
  CHECK(max_abs(theta_closed(sr, V).v) == 0.0);
  CHECK(max_abs(b_minus_delta_a_closed(ss).v) == 0.0);
  CHECK(max_abs(b_minus_delta_a_closed(sr).v) == 0.0);
}

TEST_CASE("measured B minus lap A converges to the closed form") {
  auto run = [](int n, bool rh) {
    auto g = make_grid(n, 2 * kPi, 2 * kPi);
    auto u = sample_scalar(g, [](double x) { return 0.2 * std::cos(x); });
    auto v = sample_scalar(g, [](double x) { return 0.7 * std::sin(x); });
    double dt = (n == 64) ? 5e-4 : 1.25e-4;  // tied to h^2
    auto s = rh ? make_flow_state(FlowKind::ricci_harmonic(1.3, 0.9), 0.0, conformal_metric(u), v)
                : make_flow_state(FlowKind::list_extended(1.3), 0.0, conformal_metric(u), v);
    auto tr = evolve(s, dt, 4 * dt);
    auto num = b_minus_delta_a_numeric(tr, 4);
    auto clo = b_minus_delta_a_closed(tr.half(4));
    double e = 0;
    for (int i = 0; i < n; ++i) e = std::max(e, std::fabs(num.v[i] - clo.v[i]));
    return e;
  };
  double l64 = run(64, false), l128 = run(128, false);
  CHECK(l128 < 3e-3);  // measured 2.0e-3
  CHECK(l64 / l128 > 3.5);
  CHECK(l64 / l128 < 4.5);
  double r64 = run(64, true), r128 = run(128, true);
  CHECK(r128 < 3e-3);  // measured 1.99e-3
  CHECK(r64 / r128 > 3.5);
  CHECK(r64 / r128 < 4.5);

  auto g = make_grid(64, 2 * kPi, 2 * kPi);
  auto s = make_flow_state(FlowKind::ricci(), 0.0, bump_metric(64));
  auto tr = evolve(s, 5e-4, 2e-3);
  CHECK_THROWS_AS(b_minus_delta_a_numeric(tr, 0), ConfigError);
  CHECK_THROWS_AS(b_minus_delta_a_numeric(tr, tr.half_count() - 1), ConfigError);
}

TEST_CASE("oversized steps raise a numeric error with a time stamp") {
  auto s0 = make_flow_state(FlowKind::ricci(), 0.0, bump_metric(64));
  bool thrown = false;
  try {
    evolve(s0, 1.0, 10.0);
  } catch (const NumericError& e) {
    thrown = true;
    CHECK(e.time > 0.0);
    CHECK(e.time <= 10.0);
  }
  CHECK(thrown);
}

TEST_CASE("coupling that crosses zero stops the run") {
  auto g = make_grid(32, 2 * kPi, 2 * kPi);
  auto v = sample_scalar(g, [](double x) { return 0.1 * std::sin(x); });
  auto s = make_flow_state(FlowKind::ricci_harmonic(0.1, 1.0), 0.0, flat_metric(g), v);
  CHECK_THROWS_AS(evolve(s, 0.01, 0.2), NumericError);
}

TEST_CASE("stable step size scales with the grid spacing squared") {
  auto s64 = make_flow_state(FlowKind::ricci(), 0.0, bump_metric(64));
  auto s128 = make_flow_state(FlowKind::ricci(), 0.0, bump_metric(128));
  double d64 = stable_dt(s64, 1.0);
  double d128 = stable_dt(s128, 1.0);
  CHECK(d64 > 0.0);
  CHECK(d64 / d128 == doctest::Approx(4.0).epsilon(1e-12));

  // A coupling above one shrinks the step proportionally.
  auto g = make_grid(64, 2 * kPi, 2 * kPi);
  auto v = make_scalar(g, 0.0);
  auto sl = make_flow_state(FlowKind::list_extended(5.0), 0.0, flat_metric(g), v);
  auto s1 = make_flow_state(FlowKind::list_extended(1.0), 0.0, flat_metric(g), v);
  CHECK(stable_dt(s1, 1.0) / stable_dt(sl, 1.0) == doctest::Approx(5.0).epsilon(1e-12));
}

}  // TEST_SUITE
