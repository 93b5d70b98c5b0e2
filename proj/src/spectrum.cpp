#include "flowlab/spectrum.hpp"

#include <cmath>
#include <string>

#include "flowlab/rng.hpp"

namespace flowlab {

namespace detail {

std::vector<double> apply_operator(const Metric& g, const ScalarField& A, double c,
                                   const std::vector<double>& f, double shift) {
  const size_t n = f.size();
  const double h = g.grid.dx();
  std::vector<double> kappa(n);
  for (size_t i = 0; i < n; ++i) kappa[i] = std::sqrt(g.b[i] / g.a[i]);
  std::vector<double> lap = fd::div_form(kappa, f, h);
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    const double rho = std::sqrt(g.a[i] * g.b[i]);
    out[i] = -lap[i] / rho + (c * A.v[i] - shift) * f[i];
  }
  return out;
}

std::vector<double> solve_cyclic_tridiag(const std::vector<double>& sub,
                                         const std::vector<double>& diag,
                                         const std::vector<double>& sup,
                                         const std::vector<double>& rhs) {
  const size_t n = diag.size();
  const double alpha = sup[n - 1];  // M[n-1][0]
  const double beta = sub[0];       // M[0][n-1]
  const double gamma = -diag[0];

  std::vector<double> d(diag);
  d[0] -= gamma;
  d[n - 1] -= alpha * beta / gamma;

  auto thomas = [&](const std::vector<double>& r) {
    std::vector<double> cp(n), x(n);
    double piv = d[0];
    cp[0] = sup[0] / piv;
    x[0] = r[0] / piv;
    for (size_t i = 1; i < n; ++i) {
      piv = d[i] - sub[i] * cp[i - 1];
      cp[i] = (i + 1 < n) ? sup[i] / piv : 0.0;
      x[i] = (r[i] - sub[i] * x[i - 1]) / piv;
    }
    for (size_t i = n - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
    return x;
  };

  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = alpha;
  std::vector<double> y = thomas(rhs);
  std::vector<double> z = thomas(u);
  const double frac =
      (y[0] + beta * y[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
  for (size_t i = 0; i < n; ++i) y[i] -= frac * z[i];
  return y;
}

}  // namespace detail

namespace {

std::vector<double> weights(const Metric& g) {
  const size_t n = g.a.size();
  std::vector<double> mu(n);
  const double cell = g.grid.dx() * g.grid.len_y;
  for (size_t i = 0; i < n; ++i) mu[i] = std::sqrt(g.a[i] * g.b[i]) * cell;
  return mu;
}

double wdot(const std::vector<double>& mu, const std::vector<double>& f,
            const std::vector<double>& g) {
  double sum = 0.0, comp = 0.0;
  for (size_t i = 0; i < f.size(); ++i) {
    const double term = f[i] * g[i] * mu[i];
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace

EigenResult lowest_eigenpair(const Metric& g, const ScalarField& A, double c,
                             const EigenOptions& opt) {
  require_same_grid(g.grid, A.grid, "lowest_eigenpair");
  const size_t n = g.a.size();
  const double h = g.grid.dx();
  std::vector<double> mu = weights(g);

  double shift = c * A.v[0];
  for (size_t i = 1; i < n; ++i) shift = std::min(shift, c * A.v[i]);
  shift -= 1.0;

  // Matrix rows of L - shift.
  std::vector<double> kappa(n), sub(n), diag(n), sup(n);
  for (size_t i = 0; i < n; ++i) kappa[i] = std::sqrt(g.b[i] / g.a[i]);
  const double h2 = h * h;
  for (size_t i = 0; i < n; ++i) {
    const size_t ip = (i + 1 == n) ? 0 : i + 1;
    const size_t im = (i == 0) ? n - 1 : i - 1;
    const double rho = std::sqrt(g.a[i] * g.b[i]);
    const double kp = 0.5 * (kappa[i] + kappa[ip]);
    const double km = 0.5 * (kappa[i] + kappa[im]);
    sub[i] = -km / (rho * h2);
    sup[i] = -kp / (rho * h2);
    diag[i] = (kp + km) / (rho * h2) + c * A.v[i] - shift;
  }

  std::vector<double> x(n, 1.0);
  if (opt.start) {
    if (opt.start->size() != n) throw ConfigError("warm start has wrong size");
    x = *opt.start;
  } else if (opt.seed != 0) {
    SplitMix64 rng(opt.seed);
    for (double& xi : x) xi = rng.range(0.5, 1.5);
  }

  double lam = 0.0, res = 0.0;
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    std::vector<double> y = detail::solve_cyclic_tridiag(sub, diag, sup, x);
    const double nrm = std::sqrt(wdot(mu, y, y));
    if (!(nrm > 0.0) || !std::isfinite(nrm))
      throw ConvergenceError("inverse iteration produced a degenerate vector", nrm);
    for (size_t i = 0; i < n; ++i) x[i] = y[i] / nrm;
    std::vector<double> lx = detail::apply_operator(g, A, c, x);
    lam = wdot(mu, x, lx);
    double rsq = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double r = lx[i] - lam * x[i];
      rsq += r * r * mu[i];
    }
    res = std::sqrt(rsq);
    if (res <= opt.tol * std::max(1.0, std::abs(lam))) break;
  }
  if (res > opt.tol * std::max(1.0, std::abs(lam)))
    throw ConvergenceError("eigensolver did not reach tolerance", res);

  double total = 0.0;
  for (size_t i = 0; i < n; ++i) total += x[i] * mu[i];
  if (total < 0.0)
    for (double& xi : x) xi = -xi;
  if (min_value(x) <= 0.0)
    throw ConvergenceError("ground state is not strictly positive", min_value(x));

  EigenResult out;
  out.lam = lam;
  out.f = ScalarField{g.grid, std::move(x)};
  out.iterations = it + 1;
  out.residual = res;
  return out;
}

double rayleigh_quotient(const Metric& g, const ScalarField& A, double c,
                         const ScalarField& f) {
  require_same_grid(g.grid, f.grid, "rayleigh_quotient");
  std::vector<double> mu = weights(g);
  std::vector<double> lf = detail::apply_operator(g, A, c, f.v);
  return wdot(mu, f.v, lf) / wdot(mu, f.v, f.v);
}

double lowest_eigenvalue_2d(const Metric& g, const ScalarField& A, double c, int n_y,
                            double tol) {
  require_same_grid(g.grid, A.grid, "lowest_eigenvalue_2d");
  const int nx = g.grid.n;
  if (n_y < 4) throw ConfigError("n_y must be >= 4");
  if (nx * n_y > 4096) throw ConfigError("2-D cross-check limited to 4096 points");
  const size_t total = static_cast<size_t>(nx) * static_cast<size_t>(n_y);
  const double h = g.grid.dx();
  const double hy = g.grid.len_y / n_y;

  std::vector<double> kappa(static_cast<size_t>(nx)), rho(static_cast<size_t>(nx)),
      eta(static_cast<size_t>(nx));
  for (int i = 0; i < nx; ++i) {
    kappa[static_cast<size_t>(i)] = std::sqrt(g.b[static_cast<size_t>(i)] / g.a[static_cast<size_t>(i)]);
    rho[static_cast<size_t>(i)] = std::sqrt(g.a[static_cast<size_t>(i)] * g.b[static_cast<size_t>(i)]);
    eta[static_cast<size_t>(i)] = std::sqrt(g.a[static_cast<size_t>(i)] / g.b[static_cast<size_t>(i)]);
  }

  double shift = c * A.v[0];
  for (int i = 1; i < nx; ++i) shift = std::min(shift, c * A.v[static_cast<size_t>(i)]);
  shift -= 1.0;

  auto idx = [&](int i, int j) {
    return static_cast<size_t>(i) * static_cast<size_t>(n_y) + static_cast<size_t>(j);
  };

  // (L - shift) f, matrix-free.
  auto apply = [&](const std::vector<double>& f, std::vector<double>& out) {
    for (int i = 0; i < nx; ++i) {
      const int ip = (i + 1 == nx) ? 0 : i + 1;
      const int im = (i == 0) ? nx - 1 : i - 1;
      const size_t si = static_cast<size_t>(i);
      const double kp = 0.5 * (kappa[si] + kappa[static_cast<size_t>(ip)]);
      const double km = 0.5 * (kappa[si] + kappa[static_cast<size_t>(im)]);
      const double pot = c * A.v[si] - shift;
      for (int j = 0; j < n_y; ++j) {
        const int jp = (j + 1 == n_y) ? 0 : j + 1;
        const int jm = (j == 0) ? n_y - 1 : j - 1;
        const double fij = f[idx(i, j)];
        const double dx2 = (kp * (f[idx(ip, j)] - fij) - km * (fij - f[idx(im, j)])) / (h * h);
        const double dy2 = eta[si] * (f[idx(i, jp)] - 2.0 * fij + f[idx(i, jm)]) / (hy * hy);
        out[idx(i, j)] = -(dx2 + dy2) / rho[si] + pot * fij;
      }
    }
  };

  std::vector<double> mu(total);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < n_y; ++j) mu[idx(i, j)] = rho[static_cast<size_t>(i)] * h * hy;

  auto dotw = [&](const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (size_t k = 0; k < total; ++k) s += p[k] * q[k] * mu[k];
    return s;
  };

  // CG in the weighted inner product; (L - shift) is SPD there.
  auto solve = [&](const std::vector<double>& rhs, std::vector<double>& x) {
    std::vector<double> r(rhs), p, ap(total);
    std::fill(x.begin(), x.end(), 0.0);
    p = r;
    double rr = dotw(r, r);
    const double stop = 1e-24 * rr;
    for (int k = 0; k < 20000 && rr > stop; ++k) {
      apply(p, ap);
      const double a = rr / dotw(p, ap);
      for (size_t m = 0; m < total; ++m) {
        x[m] += a * p[m];
        r[m] -= a * ap[m];
      }
      const double rr2 = dotw(r, r);
      const double beta = rr2 / rr;
      rr = rr2;
      for (size_t m = 0; m < total; ++m) p[m] = r[m] + beta * p[m];
    }
  };

  std::vector<double> x(total, 1.0), y(total), lx(total);
  double nrm = std::sqrt(dotw(x, x));
  for (auto& v : x) v /= nrm;
  double lam = 0.0;
  for (int it = 0; it < 500; ++it) {
    solve(x, y);
    nrm = std::sqrt(dotw(y, y));
    for (size_t k = 0; k < total; ++k) x[k] = y[k] / nrm;
    apply(x, lx);
    const double lam_new = dotw(x, lx) + shift;
    double rsq = 0.0;
    for (size_t k = 0; k < total; ++k) {
      const double r = lx[k] - (lam_new - shift) * x[k];
      rsq += r * r * mu[k];
    }
    const bool done = std::sqrt(rsq) <= tol * std::max(1.0, std::abs(lam_new)) &&
                      std::abs(lam_new - lam) <= tol * std::max(1.0, std::abs(lam_new));
    lam = lam_new;
    if (done) return lam;
  }
  throw ConvergenceError("2-D eigensolver did not converge", 0.0);
}

namespace {

ScalarField log_of(const ScalarField& f) {
  if (min_value(f.v) <= 0.0) throw ConfigError("eigenfunction must be positive");
  ScalarField out = f;
  for (double& x : out.v) x = std::log(x);
  return out;
}

}  // namespace

double lambda_prime_formula(const FlowState& s, const EigenResult& eig, double c,
                            const ScalarField& bmda) {
  require_same_grid(s.metric.grid, eig.f.grid, "lambda_prime_formula");
  ScalarField lf = log_of(eig.f);
  TensorField al = alpha(s);
  TensorField d = tensor_add(al, hessian(s.metric, lf), -2.0);
  ScalarField dsq = tensor_norm_sq(s.metric, d);
  ScalarField asq = tensor_norm_sq(s.metric, al);
  VectorField v2 = gradient(s.metric, lf);
  for (size_t i = 0; i < v2.x.size(); ++i) v2.x[i] *= 2.0;
  ScalarField th = theta_general(s, v2, bmda);
  ScalarField integrand = make_scalar(s.metric.grid);
  const double k4 = 4.0 * c - 1.0;
  for (size_t i = 0; i < integrand.v.size(); ++i)
    integrand.v[i] = 0.5 *
                     (dsq.v[i] + k4 * asq.v[i] + th.v[i] + 0.5 * k4 * bmda.v[i]) *
                     eig.f.v[i] * eig.f.v[i];
  return integrate(s.metric, integrand);
}

double lambda_prime_flow_form(const FlowState& s, const EigenResult& eig, double c) {
  require_same_grid(s.metric.grid, eig.f.grid, "lambda_prime_flow_form");
  ScalarField lf = log_of(eig.f);
  const double k4 = 4.0 * c - 1.0;
  switch (s.kind.tag) {
    case FlowTag::Ricci: {
      TensorField rc = ricci_tensor(s.metric);
      TensorField d = tensor_add(rc, hessian(s.metric, lf), -2.0);
      ScalarField dsq = tensor_norm_sq(s.metric, d);
      ScalarField rsq = tensor_norm_sq(s.metric, rc);
      ScalarField integrand = make_scalar(s.metric.grid);
      for (size_t i = 0; i < integrand.v.size(); ++i)
        integrand.v[i] =
            0.5 * (dsq.v[i] + k4 * rsq.v[i]) * eig.f.v[i] * eig.f.v[i];
      return integrate(s.metric, integrand);
    }
    case FlowTag::ListExtended: {
      const double an = s.kind.coupling;
      TensorField al = alpha(s);
      TensorField d = tensor_add(al, hessian(s.metric, lf), -2.0);
      ScalarField dsq = tensor_norm_sq(s.metric, d);
      ScalarField asq = tensor_norm_sq(s.metric, al);
      ScalarField lap = laplace_beltrami(s.metric, s.aux);
      ScalarField cross = inner_grad(s.metric, s.aux, lf);  // <grad v, grad log f>
      ScalarField integrand = make_scalar(s.metric.grid);
      for (size_t i = 0; i < integrand.v.size(); ++i) {
        const double w = lap.v[i] + 2.0 * cross.v[i];
        integrand.v[i] = (0.5 * dsq.v[i] + (2.0 * c - 0.5) * asq.v[i] +
                          0.5 * an * (w * w + k4 * lap.v[i] * lap.v[i])) *
                         eig.f.v[i] * eig.f.v[i];
      }
      return integrate(s.metric, integrand);
    }
    default:
      throw ConfigError("specialized eigenvalue derivative exists for ricci and list only");
  }
}

std::pair<double, double> lemma_ibp_identity(const Metric& g, const ScalarField& f,
                                             double lam) {
  require_same_grid(g.grid, f.grid, "lemma_ibp_identity");
  ScalarField lf = log_of(f);
  ScalarField lap_f = laplace_beltrami(g, f);
  ScalarField f_sq = make_scalar(g.grid);
  for (size_t i = 0; i < f.v.size(); ++i) f_sq.v[i] = f.v[i] * f.v[i];
  ScalarField lap_fsq = laplace_beltrami(g, f_sq);
  ScalarField lhs_int = make_scalar(g.grid);
  for (size_t i = 0; i < f.v.size(); ++i)
    lhs_int.v[i] = (lam + lap_f.v[i] / f.v[i]) * lap_fsq.v[i];
  const double lhs = integrate(g, lhs_int);

  ScalarField hsq = tensor_norm_sq(g, hessian(g, lf));
  ScalarField rc_vv = tensor_apply(ricci_tensor(g), gradient(g, lf));
  ScalarField rhs_int = make_scalar(g.grid);
  for (size_t i = 0; i < f.v.size(); ++i)
    rhs_int.v[i] = 2.0 * (hsq.v[i] + rc_vv.v[i]) * f_sq.v[i];
  return {lhs, integrate(g, rhs_int)};
}

double normalized_lambda(const Metric& g, double lam, int dim) {
  if (dim < 1) throw ConfigError("dim must be >= 1");
  return lam * std::pow(volume(g), 2.0 / dim);
}

LambdaBarBound lambda_bar_lower_bound(const FlowState& s, const EigenResult& eig, double c,
                                      const ScalarField& bmda) {
  if (std::abs(c - 0.25) > 1e-12)
    throw ConfigError("normalized-eigenvalue bound requires c = 1/4");
  require_same_grid(s.metric.grid, eig.f.grid, "lambda_bar_lower_bound");
  const double n_dim = 2.0;
  const double vp = std::pow(volume(s.metric), 2.0 / n_dim);

  ScalarField lf = log_of(eig.f);
  ScalarField lap_lf = laplace_beltrami(s.metric, lf);
  ScalarField a = trace_a(s);
  TensorField t = tensor_add(alpha(s), hessian(s.metric, lf), -2.0);
  // traceless part: subtract (S/n) g with S = A - 2 Lap log f
  TensorField tl = t;
  std::vector<double> S(eig.f.v.size());
  for (size_t i = 0; i < S.size(); ++i) {
    S[i] = a.v[i] - 2.0 * lap_lf.v[i];
    tl.xx[i] -= S[i] / n_dim * s.metric.a[i];
    tl.yy[i] -= S[i] / n_dim * s.metric.b[i];
  }
  ScalarField tlsq = tensor_norm_sq(s.metric, tl);
  VectorField v2 = gradient(s.metric, lf);
  for (size_t i = 0; i < v2.x.size(); ++i) v2.x[i] *= 2.0;
  ScalarField th = theta_general(s, v2, bmda);

  ScalarField f_sq = make_scalar(s.metric.grid);
  for (size_t i = 0; i < S.size(); ++i) f_sq.v[i] = eig.f.v[i] * eig.f.v[i];

  ScalarField tens_int = make_scalar(s.metric.grid);
  ScalarField s1_int = make_scalar(s.metric.grid);
  ScalarField s2_int = make_scalar(s.metric.grid);
  for (size_t i = 0; i < S.size(); ++i) {
    tens_int.v[i] = (tlsq.v[i] + th.v[i]) * f_sq.v[i];
    s1_int.v[i] = S[i] * f_sq.v[i];
    s2_int.v[i] = S[i] * S[i] * f_sq.v[i];
  }
  const double s1 = integrate(s.metric, s1_int);
  const double s2 = integrate(s.metric, s2_int);

  LambdaBarBound out;
  out.tensor_term = 0.5 * vp * integrate(s.metric, tens_int);
  out.holder_gap = vp / (2.0 * n_dim) * (s2 - s1 * s1);
  out.lower_bound = out.tensor_term + out.holder_gap;
  return out;
}

SpectrumSeries build_spectrum_series(const FlowTrajectory& traj,
                                     const std::vector<double>& c_list, int stride) {
  if (stride < 1) throw ConfigError("spectrum stride must be >= 1");
  if (c_list.empty()) throw ConfigError("spectrum needs at least one c");
  SpectrumSeries out;
  out.c_list = c_list;
  out.lambda.resize(c_list.size());

  bool quarter_in_list = false;
  size_t quarter_idx = 0;
  for (size_t ci = 0; ci < c_list.size(); ++ci)
    if (std::abs(c_list[ci] - 0.25) <= 1e-12) {
      quarter_in_list = true;
      quarter_idx = ci;
    }

  std::vector<EigenOptions> warm(c_list.size() + 1);
  for (int j = 0; j < traj.full_count(); j += stride) {
    const FlowState& s = traj.full(j);
    ScalarField a = trace_a(s);
    out.full_index.push_back(j);
    out.t.push_back(s.time);

    EigenResult first_eig;
    double lam_quarter = 0.0;
    for (size_t ci = 0; ci < c_list.size(); ++ci) {
      EigenResult e = lowest_eigenpair(s.metric, a, c_list[ci], warm[ci]);
      warm[ci].start = e.f.v;
      out.lambda[ci].push_back(e.lam);
      if (ci == 0) first_eig = e;
      if (quarter_in_list && ci == quarter_idx) lam_quarter = e.lam;
    }
    ScalarField bmda = b_minus_delta_a_closed(s);
    out.lambda_prime.push_back(lambda_prime_formula(s, first_eig, c_list[0], bmda));
    if (!quarter_in_list) {
      EigenResult eq = lowest_eigenpair(s.metric, a, 0.25, warm[c_list.size()]);
      warm[c_list.size()].start = eq.f.v;
      lam_quarter = eq.lam;
    }
    out.lambda_bar.push_back(normalized_lambda(s.metric, lam_quarter, 2));
  }
  return out;
}

}  // namespace flowlab
