#include "flowlab/sphere.hpp"

#include <limits>

#include "flowlab/errors.hpp"

namespace flowlab {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kFourPi = 4.0 * kPi;
}  // namespace

double unit_sphere_volume(int dim) {
  if (dim < 2) throw ConfigError("sphere dim must be >= 2");
  return 2.0 * std::pow(kPi, (dim + 1) / 2.0) / std::tgamma((dim + 1) / 2.0);
}

double sphere_blowup_time(double s0, int dim) {
  if (!(s0 > 0.0)) throw ConfigError("initial scale must be positive");
  if (dim < 2) throw ConfigError("sphere dim must be >= 2");
  return s0 / (2.0 * (dim - 1));
}

SphereState sphere_flow(double s0, int dim, double vol_unit, double t) {
  if (!(vol_unit > 0.0)) throw ConfigError("unit volume must be positive");
  const double t_star = sphere_blowup_time(s0, dim);
  if (t >= t_star) throw NumericError("sphere has collapsed", t_star);
  return SphereState{dim, s0 - 2.0 * (dim - 1) * t, vol_unit};
}

double sphere_conjugate_u(const SphereState& s) { return 1.0 / s.volume(); }

SphereReport sphere_reports(const SphereState& s, double t, double c, double k,
                            double T_ref) {
  const int n = s.dim;
  const double v = s.volume();
  const double r = s.scalar_curvature();
  const double deriv2 = 2.0 * n * (n - 1) * (n - 1) / (s.scale * s.scale);

  SphereReport rep;
  rep.vol = v;
  rep.E = -std::log(v);
  rep.E1 = r;
  rep.E2 = deriv2;
  rep.F_k = k * r;
  rep.lam = c * r;
  rep.lam_prime = c * deriv2;
  rep.lam_bar = c * r * std::pow(v, 2.0 / n);

  const double tau = T_ref - t;
  if (tau > 0.0) {
    // Bridge form of the shrinker entropy with E1 = R and E = -log V;
    // u = 1/V has no spatial structure, so Hess log u = 0 and
    // dW = 2 tau n ((n-1)/s - 1/(2 tau))^2.
    rep.W = tau * r + std::log(v) - 0.5 * n * std::log(kFourPi * tau) - n;
    const double dev = (n - 1) / s.scale - 1.0 / (2.0 * tau);
    rep.dW = 2.0 * tau * n * dev * dev;
  } else {
    rep.W = std::numeric_limits<double>::quiet_NaN();
    rep.dW = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

double sphere_w_plus(const SphereState& s, double t, double T_ref) {
  const double sigma = t - T_ref;
  if (!(sigma > 0.0)) throw ConfigError("expander entropy needs t > T_ref");
  const int n = s.dim;
  return sigma * s.scalar_curvature() - std::log(s.volume()) +
         0.5 * n * std::log(kFourPi * sigma) + n;
}

double sphere_w_plus_derivative(const SphereState& s, double t, double T_ref) {
  const double sigma = t - T_ref;
  if (!(sigma > 0.0)) throw ConfigError("expander entropy needs t > T_ref");
  const int n = s.dim;
  const double dev = (n - 1) / s.scale + 1.0 / (2.0 * sigma);
  return 2.0 * sigma * n * dev * dev;
}

}  // namespace flowlab
