#pragma once

#include <vector>

#include "flowlab/grid.hpp"

namespace flowlab {

// Second-order periodic finite differences on the x line. div_form is the
// compact three-point stencil for d/dx(c f') with midpoint-averaged c; it sums
// to zero over the period exactly, which is what makes the discrete mass and
// total-curvature identities exact.
namespace fd {
std::vector<double> deriv(const std::vector<double>& f, double h);
std::vector<double> second(const std::vector<double>& f, double h);
std::vector<double> div_form(const std::vector<double>& c, const std::vector<double>& f, double h);
}  // namespace fd

// K, with R = 2K. For g = a dx^2 + b dy^2 (x-dependent):
//   K = -(1/(2 sqrt(ab))) d/dx( b' / sqrt(ab) )
ScalarField gauss_curvature(const Metric& g);
ScalarField scalar_curvature(const Metric& g);
TensorField ricci_tensor(const Metric& g);  // K g

// Divergence-form Laplace-Beltrami: (1/sqrt(ab)) d/dx( sqrt(b/a) f' ).
ScalarField laplace_beltrami(const Metric& g, const ScalarField& f);

ScalarField grad_norm_sq(const Metric& g, const ScalarField& f);
ScalarField inner_grad(const Metric& g, const ScalarField& f1, const ScalarField& f2);
// Index-raised gradient: (f'/a, 0).
VectorField gradient(const Metric& g, const ScalarField& f);

// Covariant Hessian of a scalar (diagonal for this metric class):
//   (Hess f)_xx = f'' - a'/(2a) f',   (Hess f)_yy = b'/(2a) f'.
TensorField hessian(const Metric& g, const ScalarField& f);

// (Div T)_k = g^{ij} grad_i T_jk, returned as 1-form components.
VectorField divergence(const Metric& g, const TensorField& T);

ScalarField tensor_norm_sq(const Metric& g, const TensorField& T);   // |T|^2_g
ScalarField metric_trace(const Metric& g, const TensorField& T);     // tr_g T
ScalarField tensor_apply(const TensorField& T, const VectorField& V);  // T(V,V)
ScalarField pair_form(const VectorField& omega, const VectorField& V);  // omega(V)

TensorField tensor_add(const TensorField& A, const TensorField& B, double sb = 1.0);
TensorField tensor_scale(const TensorField& A, double s);

// Rectangle rule against the measure sqrt(ab) dx dy (compensated summation).
double integrate(const Metric& g, const ScalarField& f);
double volume(const Metric& g);
ScalarField measure_density(const Metric& g);  // sqrt(ab)

}  // namespace flowlab
