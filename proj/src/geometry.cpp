#include "flowlab/geometry.hpp"

#include <cmath>

namespace flowlab {

namespace fd {

std::vector<double> deriv(const std::vector<double>& f, double h) {
  const size_t n = f.size();
  std::vector<double> d(n);
  for (size_t i = 0; i < n; ++i) {
    const size_t ip = (i + 1 == n) ? 0 : i + 1;
    const size_t im = (i == 0) ? n - 1 : i - 1;
    d[i] = (f[ip] - f[im]) / (2.0 * h);
  }
  return d;
}

std::vector<double> second(const std::vector<double>& f, double h) {
  const size_t n = f.size();
  std::vector<double> d(n);
  const double h2 = h * h;
  for (size_t i = 0; i < n; ++i) {
    const size_t ip = (i + 1 == n) ? 0 : i + 1;
    const size_t im = (i == 0) ? n - 1 : i - 1;
    d[i] = (f[ip] - 2.0 * f[i] + f[im]) / h2;
  }
  return d;
}

std::vector<double> div_form(const std::vector<double>& c, const std::vector<double>& f,
                             double h) {
  const size_t n = f.size();
  std::vector<double> d(n);
  const double h2 = h * h;
  for (size_t i = 0; i < n; ++i) {
    const size_t ip = (i + 1 == n) ? 0 : i + 1;
    const size_t im = (i == 0) ? n - 1 : i - 1;
    const double cp = 0.5 * (c[i] + c[ip]);
    const double cm = 0.5 * (c[i] + c[im]);
    d[i] = (cp * (f[ip] - f[i]) - cm * (f[i] - f[im])) / h2;
  }
  return d;
}

}  // namespace fd

ScalarField gauss_curvature(const Metric& g) {
  const size_t n = g.a.size();
  std::vector<double> inv_rho(n);  // 1 / sqrt(ab)
  for (size_t i = 0; i < n; ++i) inv_rho[i] = 1.0 / std::sqrt(g.a[i] * g.b[i]);
  std::vector<double> dd = fd::div_form(inv_rho, g.b, g.grid.dx());
  ScalarField k{g.grid, std::move(dd)};
  for (size_t i = 0; i < n; ++i) k.v[i] *= -0.5 * inv_rho[i];
  return k;
}

ScalarField scalar_curvature(const Metric& g) {
  ScalarField r = gauss_curvature(g);
  for (double& x : r.v) x *= 2.0;
  return r;
}

TensorField ricci_tensor(const Metric& g) {
  ScalarField k = gauss_curvature(g);
  TensorField rc = make_tensor(g.grid);
  for (size_t i = 0; i < k.v.size(); ++i) {
    rc.xx[i] = k.v[i] * g.a[i];
    rc.yy[i] = k.v[i] * g.b[i];
  }
  return rc;
}

ScalarField laplace_beltrami(const Metric& g, const ScalarField& f) {
  require_same_grid(g.grid, f.grid, "laplace_beltrami");
  const size_t n = f.v.size();
  std::vector<double> kappa(n);  // sqrt(b/a)
  for (size_t i = 0; i < n; ++i) kappa[i] = std::sqrt(g.b[i] / g.a[i]);
  std::vector<double> dd = fd::div_form(kappa, f.v, g.grid.dx());
  ScalarField out{g.grid, std::move(dd)};
  for (size_t i = 0; i < n; ++i) out.v[i] /= std::sqrt(g.a[i] * g.b[i]);
  return out;
}

ScalarField grad_norm_sq(const Metric& g, const ScalarField& f) {
  require_same_grid(g.grid, f.grid, "grad_norm_sq");
  std::vector<double> df = fd::deriv(f.v, g.grid.dx());
  ScalarField out{g.grid, std::move(df)};
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] = out.v[i] * out.v[i] / g.a[i];
  return out;
}

ScalarField inner_grad(const Metric& g, const ScalarField& f1, const ScalarField& f2) {
  require_same_grid(g.grid, f1.grid, "inner_grad");
  require_same_grid(g.grid, f2.grid, "inner_grad");
  std::vector<double> d1 = fd::deriv(f1.v, g.grid.dx());
  std::vector<double> d2 = fd::deriv(f2.v, g.grid.dx());
  ScalarField out{g.grid, std::move(d1)};
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] = out.v[i] * d2[i] / g.a[i];
  return out;
}

VectorField gradient(const Metric& g, const ScalarField& f) {
  require_same_grid(g.grid, f.grid, "gradient");
  std::vector<double> df = fd::deriv(f.v, g.grid.dx());
  VectorField out = make_vector(g.grid);
  for (size_t i = 0; i < df.size(); ++i) out.x[i] = df[i] / g.a[i];
  return out;
}

TensorField hessian(const Metric& g, const ScalarField& f) {
  require_same_grid(g.grid, f.grid, "hessian");
  const double h = g.grid.dx();
  std::vector<double> df = fd::deriv(f.v, h);
  std::vector<double> d2f = fd::second(f.v, h);
  std::vector<double> da = fd::deriv(g.a, h);
  std::vector<double> db = fd::deriv(g.b, h);
  TensorField out = make_tensor(g.grid);
  for (size_t i = 0; i < df.size(); ++i) {
    out.xx[i] = d2f[i] - da[i] / (2.0 * g.a[i]) * df[i];
    out.yy[i] = db[i] / (2.0 * g.a[i]) * df[i];
  }
  return out;
}

VectorField divergence(const Metric& g, const TensorField& T) {
  require_same_grid(g.grid, T.grid, "divergence");
  const double h = g.grid.dx();
  std::vector<double> dp = fd::deriv(T.xx, h);
  std::vector<double> da = fd::deriv(g.a, h);
  std::vector<double> db = fd::deriv(g.b, h);
  VectorField out = make_vector(g.grid);
  for (size_t i = 0; i < dp.size(); ++i) {
    const double p = T.xx[i], q = T.yy[i];
    out.x[i] = (dp[i] - da[i] / g.a[i] * p) / g.a[i] +
               (db[i] / (2.0 * g.a[i]) * p - db[i] / (2.0 * g.b[i]) * q) / g.b[i];
  }
  return out;
}

ScalarField tensor_norm_sq(const Metric& g, const TensorField& T) {
  require_same_grid(g.grid, T.grid, "tensor_norm_sq");
  ScalarField out = make_scalar(g.grid);
  for (size_t i = 0; i < out.v.size(); ++i) {
    const double p = T.xx[i] / g.a[i], q = T.yy[i] / g.b[i];
    out.v[i] = p * p + q * q;
  }
  return out;
}

ScalarField metric_trace(const Metric& g, const TensorField& T) {
  require_same_grid(g.grid, T.grid, "metric_trace");
  ScalarField out = make_scalar(g.grid);
  for (size_t i = 0; i < out.v.size(); ++i)
    out.v[i] = T.xx[i] / g.a[i] + T.yy[i] / g.b[i];
  return out;
}

ScalarField tensor_apply(const TensorField& T, const VectorField& V) {
  require_same_grid(T.grid, V.grid, "tensor_apply");
  ScalarField out = make_scalar(T.grid);
  for (size_t i = 0; i < out.v.size(); ++i)
    out.v[i] = T.xx[i] * V.x[i] * V.x[i] + T.yy[i] * V.y[i] * V.y[i];
  return out;
}

ScalarField pair_form(const VectorField& omega, const VectorField& V) {
  require_same_grid(omega.grid, V.grid, "pair_form");
  ScalarField out = make_scalar(omega.grid);
  for (size_t i = 0; i < out.v.size(); ++i)
    out.v[i] = omega.x[i] * V.x[i] + omega.y[i] * V.y[i];
  return out;
}

TensorField tensor_add(const TensorField& A, const TensorField& B, double sb) {
  require_same_grid(A.grid, B.grid, "tensor_add");
  TensorField out = A;
  for (size_t i = 0; i < out.xx.size(); ++i) {
    out.xx[i] += sb * B.xx[i];
    out.yy[i] += sb * B.yy[i];
  }
  return out;
}

TensorField tensor_scale(const TensorField& A, double s) {
  TensorField out = A;
  for (size_t i = 0; i < out.xx.size(); ++i) {
    out.xx[i] *= s;
    out.yy[i] *= s;
  }
  return out;
}

double integrate(const Metric& g, const ScalarField& f) {
  require_same_grid(g.grid, f.grid, "integrate");
  // Neumaier-compensated sum; keeps quadrature roundoff at the ulp level so
  // time differences of integrals stay clean.
  double sum = 0.0, comp = 0.0;
  for (size_t i = 0; i < f.v.size(); ++i) {
    const double term = f.v[i] * std::sqrt(g.a[i] * g.b[i]);
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  return (sum + comp) * g.grid.dx() * g.grid.len_y;
}

double volume(const Metric& g) {
  return integrate(g, make_scalar(g.grid, 1.0));
}

ScalarField measure_density(const Metric& g) {
  ScalarField out = make_scalar(g.grid);
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] = std::sqrt(g.a[i] * g.b[i]);
  return out;
}

}  // namespace flowlab
