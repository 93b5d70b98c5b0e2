#include <cmath>
#include <vector>

#include "doctest.h"
#include "flowlab/errors.hpp"
#include "flowlab/fourier.hpp"
#include "flowlab/geometry.hpp"
#include "flowlab/grid.hpp"

using namespace flowlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

Metric conf_metric(int n) {
  auto g = make_grid(n, 2 * kPi, 2 * kPi);
  auto u = sample_scalar(g, [](double x) { return 0.1 * std::cos(x); });
  return conformal_metric(u);
}

Metric random_metric(int n) {
  auto g = make_grid(n, 2 * kPi, 2 * kPi);
  auto la = sample(g, FourierSeries::random(11, 4, 0.4));
  auto lb = sample(g, FourierSeries::random(12, 4, 0.4));
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = std::exp(la.v[i]);
    b[i] = std::exp(lb.v[i]);
  }
  return make_metric(g, std::move(a), std::move(b));
}

template <class Exact>
double max_err(const ScalarField& f, Exact&& exact) {
  auto xs = grid_points(f.grid);
  double e = 0;
  for (int i = 0; i < f.grid.n; ++i) e = std::max(e, std::fabs(f.v[i] - exact(xs[i])));
  return e;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("grid construction rejects bad sizes") {
  CHECK_THROWS_AS(make_grid(8, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(make_grid(17, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(make_grid(32, -1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(make_grid(32, 1.0, 0.0), ConfigError);
  auto g = make_grid(32, 2 * kPi, 1.0);
  CHECK(g.dx() == doctest::Approx(2 * kPi / 32).epsilon(1e-15));
}

TEST_CASE("metric construction requires positive coefficients") {
  auto g = make_grid(16, 1.0, 1.0);
  std::vector<double> a(16, 1.0), b(16, 1.0);
  b[7] = 0.0;
  CHECK_THROWS_AS(make_metric(g, a, b), ConfigError);
  b[7] = -2.0;
  CHECK_THROWS_AS(make_metric(g, a, b), ConfigError);
}

TEST_CASE("quadrature is exact for constants") {
  auto flat = flat_metric(make_grid(256, 2 * kPi, 2 * kPi));
  double q = integrate(flat, make_scalar(flat.grid, 1.0));
  CHECK(q == doctest::Approx(4 * kPi * kPi).epsilon(1e-14));
  CHECK(volume(flat) == doctest::Approx(4 * kPi * kPi).epsilon(1e-14));
}

TEST_CASE("total curvature of a torus vanishes identically") {
  auto m = random_metric(256);
  CHECK(std::fabs(integrate(m, gauss_curvature(m))) < 1e-12);
}

TEST_CASE("curvature of a conformal metric matches the closed form") {
  // a = b = exp(0.2 cos x) gives K = 0.1 cos(x) exp(-0.2 cos x).
  auto exact = [](double x) { return 0.1 * std::cos(x) * std::exp(-0.2 * std::cos(x)); };
  double e128 = max_err(gauss_curvature(conf_metric(128)), exact);
  double e256 = max_err(gauss_curvature(conf_metric(256)), exact);
  CHECK(e256 < 1e-5);  // measured 6.13e-6
  CHECK(e128 / e256 > 3.5);
  CHECK(e128 / e256 < 4.5);
  auto R = scalar_curvature(conf_metric(256));
  double eR = max_err(R, [&](double x) { return 2 * exact(x); });
  CHECK(eR < 2e-5);
}

TEST_CASE("laplacian of a conformal metric matches the closed form") {
  auto run = [](int n) {
    auto m = conf_metric(n);
    auto f = sample_scalar(m.grid, [](double x) { return std::sin(x); });
    return max_err(laplace_beltrami(m, f),
                   [](double x) { return -std::exp(-0.2 * std::cos(x)) * std::sin(x); });
  };
  double e128 = run(128), e256 = run(256);
  CHECK(e256 < 8e-5);  // measured 5.12e-5
  CHECK(e128 / e256 > 3.5);
  CHECK(e128 / e256 < 4.5);
}

TEST_CASE("hessian components match the closed form") {
  auto run = [](int n, double* exx, double* eyy) {
    auto m = conf_metric(n);
    auto f = sample_scalar(m.grid, [](double x) { return std::sin(x); });
    auto H = hessian(m, f);
    auto xs = grid_points(m.grid);
    *exx = *eyy = 0;
    for (int i = 0; i < n; ++i) {
      double x = xs[i];
      *exx = std::max(*exx, std::fabs(H.xx[i] - (-std::sin(x) + 0.1 * std::sin(x) * std::cos(x))));
      *eyy = std::max(*eyy, std::fabs(H.yy[i] - (-0.1 * std::sin(x) * std::cos(x))));
    }
  };
  double xx128, yy128, xx256, yy256;
  run(128, &xx128, &yy128);
  run(256, &xx256, &yy256);
  CHECK(xx256 < 8e-5);  // measured 5.30e-5
  CHECK(yy256 < 2e-5);  // measured 1.21e-5
  CHECK(xx128 / xx256 > 3.5);
  CHECK(xx128 / xx256 < 4.5);
  CHECK(yy128 / yy256 > 3.5);
  CHECK(yy128 / yy256 < 4.5);
}

TEST_CASE("trace of the hessian converges to the laplacian") {
  auto run = [](int n) {
    auto m = random_metric(n);
    auto f = sample_scalar(m.grid, [](double x) { return std::sin(x) + 0.3 * std::cos(2 * x); });
    auto lf = laplace_beltrami(m, f);
    auto tr = metric_trace(m, hessian(m, f));
    double e = 0;
    for (int i = 0; i < n; ++i) e = std::max(e, std::fabs(lf.v[i] - tr.v[i]));
    return e;
  };
  double e128 = run(128), e256 = run(256);
  CHECK(e256 < 2e-4);  // measured 1.34e-4
  CHECK(e128 / e256 > 3.5);
  CHECK(e128 / e256 < 4.5);
}

TEST_CASE("divergence of the ricci tensor converges to dK") {
  auto run = [](int n) {
    auto m = conf_metric(n);
    auto d = divergence(m, ricci_tensor(m));
    auto xs = grid_points(m.grid);
    double e = 0;
    for (int i = 0; i < n; ++i) {
      double x = xs[i];
      double kp = std::exp(-0.2 * std::cos(x)) *
                  (-0.1 * std::sin(x) + 0.02 * std::sin(x) * std::cos(x));
      e = std::max(e, std::fabs(d.x[i] - kp));
    }
    CHECK(max_abs(d.y) == 0.0);
    return e;
  };
  double e128 = run(128), e256 = run(256);
  CHECK(e256 < 2.5e-5);  // measured 1.52e-5
  CHECK(e128 / e256 > 3.5);
  CHECK(e128 / e256 < 4.5);
}

TEST_CASE("integration by parts holds to second order") {
  auto run = [](int n) {
    auto m = random_metric(n);
    auto f = sample_scalar(m.grid, [](double x) { return std::sin(x) + 0.3 * std::cos(2 * x); });
    auto w = sample_scalar(m.grid, [](double x) { return std::cos(3 * x); });
    auto lf = laplace_beltrami(m, f);
    ScalarField prod = make_scalar(m.grid);
    for (int i = 0; i < n; ++i) prod.v[i] = lf.v[i] * w.v[i];
    return std::fabs(integrate(m, prod) + integrate(m, inner_grad(m, f, w)));
  };
  double e128 = run(128), e256 = run(256);
  CHECK(e256 < 1.7e-3);  // measured 1.08e-3
  CHECK(e128 / e256 > 3.5);
  CHECK(e128 / e256 < 4.5);

  // The integral of a laplacian telescopes to zero exactly.
  auto m = random_metric(128);
  auto f = sample_scalar(m.grid, [](double x) { return std::exp(std::sin(x)); });
  CHECK(std::fabs(integrate(m, laplace_beltrami(m, f))) < 1e-12);
}

TEST_CASE("tensor algebra identities") {
  auto m = random_metric(64);
  TensorField gt{m.grid, m.a, m.b};
  auto nsq = tensor_norm_sq(m, gt);
  auto tr = metric_trace(m, gt);
  for (int i = 0; i < m.grid.n; ++i) {
    CHECK(nsq.v[i] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(tr.v[i] == doctest::Approx(2.0).epsilon(1e-14));
  }

  auto V = make_vector(m.grid, 3.0, 4.0);
  auto q = tensor_apply(gt, V);
  for (int i = 0; i < m.grid.n; ++i)
    CHECK(q.v[i] == doctest::Approx(9 * m.a[i] + 16 * m.b[i]).epsilon(1e-14));

  auto om = make_vector(m.grid, 1.0, 2.0);
  auto p = pair_form(om, V);
  for (int i = 0; i < m.grid.n; ++i) CHECK(p.v[i] == doctest::Approx(11.0).epsilon(1e-14));

  auto s = tensor_add(gt, gt, -1.0);
  CHECK(max_abs(s.xx) == 0.0);
  CHECK(max_abs(s.yy) == 0.0);
  auto sc = tensor_scale(gt, 0.5);
  for (int i = 0; i < m.grid.n; ++i) CHECK(sc.xx[i] == doctest::Approx(0.5 * m.a[i]));
}

TEST_CASE("gradient norms agree with the raised gradient") {
  auto m = random_metric(64);
  auto f = sample_scalar(m.grid, [](double x) { return std::sin(2 * x); });
  auto gsq = grad_norm_sq(m, f);
  auto ig = inner_grad(m, f, f);
  auto gr = gradient(m, f);
  TensorField gt{m.grid, m.a, m.b};
  auto applied = tensor_apply(gt, gr);  // g(grad f, grad f) = |grad f|^2
  for (int i = 0; i < m.grid.n; ++i) {
    CHECK(gsq.v[i] == doctest::Approx(ig.v[i]).epsilon(1e-14));
    CHECK(gsq.v[i] == doctest::Approx(applied.v[i]).epsilon(1e-13));
  }
  CHECK(max_abs(gr.y) == 0.0);
}

TEST_CASE("fourier series derivative is consistent") {
  auto fs = FourierSeries::random(3, 3, 0.5);
  double e = 0;
  for (int i = 0; i < 16; ++i) {
    double x = i * (2 * kPi / 16);
    double fd = (fs.eval(x + 1e-5, 2 * kPi) - fs.eval(x - 1e-5, 2 * kPi)) / 2e-5;
    e = std::max(e, std::fabs(fd - fs.deriv(x, 2 * kPi)));
  }
  CHECK(e < 1e-8);

  // Sampling at two resolutions hits the same analytic profile.
  auto g1 = make_grid(32, 2 * kPi, 1.0);
  auto g2 = make_grid(64, 2 * kPi, 1.0);
  auto s1 = sample(g1, fs);
  auto s2 = sample(g2, fs);
  for (int i = 0; i < 32; ++i) CHECK(s1.v[i] == doctest::Approx(s2.v[2 * i]).epsilon(1e-15));
}

}  // TEST_SUITE
