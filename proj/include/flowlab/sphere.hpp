#pragma once

#include <cmath>

namespace flowlab {

// Round sphere under the curvature flow: g = s(t) g_unit with
// s(t) = s0 - 2(n-1) t, so everything below is closed form. Serves as the
// exact oracle for the grid pipeline's formulas.
struct SphereState {
  int dim = 2;
  double scale = 1.0;
  double vol_unit = 1.0;  // volume of the unit round sphere being scaled

  double volume() const { return vol_unit * std::pow(scale, dim / 2.0); }
  double scalar_curvature() const { return dim * (dim - 1) / scale; }
};

double unit_sphere_volume(int dim);
double sphere_blowup_time(double s0, int dim);  // s0 / (2(n-1))
SphereState sphere_flow(double s0, int dim, double vol_unit, double t);

// u = 1/V(t) solves the conjugate heat equation on the shrinking sphere.
double sphere_conjugate_u(const SphereState& s);

struct SphereReport {
  double vol = 0.0;
  double E = 0.0;        // -log V
  double E1 = 0.0;       // R
  double E2 = 0.0;       // 2 n (n-1)^2 / s^2
  double F_k = 0.0;      // k R
  double lam = 0.0;      // c R
  double lam_prime = 0.0;
  double lam_bar = 0.0;  // c R V^{2/n}
  double W = 0.0;        // NaN when tau = T_ref - t <= 0
  double dW = 0.0;
};

// T_ref is the shrinker reference time; at T_ref = blow-up time the shrinking
// sphere is the exact soliton and W is constant in t with dW = 0.
SphereReport sphere_reports(const SphereState& s, double t, double c, double k,
                            double T_ref);

double sphere_w_plus(const SphereState& s, double t, double T_ref);
double sphere_w_plus_derivative(const SphereState& s, double t, double T_ref);

}  // namespace flowlab
