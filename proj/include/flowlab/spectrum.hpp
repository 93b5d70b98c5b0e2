#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "flowlab/flows.hpp"

namespace flowlab {

// Lowest eigenpair of L f = -Lap f + c A f. The operator is assembled with the
// same compact stencil as laplace_beltrami and is exactly self-adjoint in the
// measure-weighted inner product <f,g> = sum f g sqrt(ab) h len_y. Solved by
// inverse power iteration shifted to min(cA) - 1, with a direct cyclic
// tridiagonal solve per iteration.
struct EigenOptions {
  double tol = 1e-10;   // residual target, relative to max(1, |lam|)
  int max_iter = 10000;
  uint64_t seed = 0;    // 0: all-ones start vector
  std::optional<std::vector<double>> start;  // warm start (overrides seed)
};

struct EigenResult {
  double lam = 0.0;
  ScalarField f;  // positive, integral f^2 dy = 1
  int iterations = 0;
  double residual = 0.0;
};

EigenResult lowest_eigenpair(const Metric& g, const ScalarField& A, double c,
                             const EigenOptions& opt = {});

double rayleigh_quotient(const Metric& g, const ScalarField& A, double c,
                         const ScalarField& f);

// Full 2-D assembly of the same operator on an n x n_y grid (x-dependent
// coefficients), lowest eigenvalue by inverse iteration with a conjugate
// gradient inner solve. Cross-check only; n * n_y <= 4096.
double lowest_eigenvalue_2d(const Metric& g, const ScalarField& A, double c, int n_y,
                            double tol = 1e-9);

// lam'(t) = 1/2 integral ( |alpha - 2 Hess log f|^2 + (4c-1)|alpha|^2
//                          + Theta(2 grad log f) + (4c-1)/2 (B - Lap A) ) f^2 dy.
// Needs no heat solution by construction.
double lambda_prime_formula(const FlowState& s, const EigenResult& eig, double c,
                            const ScalarField& bmda);

// Per-flow specialized integrands (Ricci and ListExtended only):
//   Ricci:  1/2 integral ( |Rc - 2 Hess log f|^2 + (4c-1)|Rc|^2 ) f^2
//   List:   integral ( 1/2 |alpha - 2 Hess log f|^2 + (2c - 1/2)|alpha|^2
//           + a_n/2 ((Lap v + 2<grad v, grad log f>)^2 + (4c-1)(Lap v)^2) ) f^2
double lambda_prime_flow_form(const FlowState& s, const EigenResult& eig, double c);

// Integration-by-parts identity behind the eigenvalue derivative:
//   integral psi Lap(f^2) dy = 2 integral (|Hess log f|^2 + Rc(grad log f, grad log f)) f^2,
// psi = lam + (Lap f)/f. Returns (lhs, rhs).
std::pair<double, double> lemma_ibp_identity(const Metric& g, const ScalarField& f,
                                             double lam);

double normalized_lambda(const Metric& g, double lam, int dim = 2);  // lam V^{2/dim}

// Lower bound for d/dt of the normalized eigenvalue at c = 1/4, valid while
// lam <= 0: traceless-tensor piece plus the Cauchy-Schwarz gap, each >= 0 up
// to discretization.
struct LambdaBarBound {
  double lower_bound = 0.0;
  double tensor_term = 0.0;  // V^{2/n}/2 * integral (|traceless|^2 + Theta) f^2
  double holder_gap = 0.0;   // V^{2/n}/(2n) * (int S^2 f^2 - (int S f^2)^2), S = A - 2 Lap log f
};
LambdaBarBound lambda_bar_lower_bound(const FlowState& s, const EigenResult& eig, double c,
                                      const ScalarField& bmda);

struct SpectrumSeries {
  std::vector<int> full_index;
  std::vector<double> t;
  std::vector<double> c_list;
  std::vector<std::vector<double>> lambda;  // [c][row]
  std::vector<double> lambda_prime;         // at c_list[0]
  std::vector<double> lambda_bar;           // at c = 1/4
};
SpectrumSeries build_spectrum_series(const FlowTrajectory& traj,
                                     const std::vector<double>& c_list, int stride);

namespace detail {
// (L - shift) f with the exact stencil used by the eigensolver.
std::vector<double> apply_operator(const Metric& g, const ScalarField& A, double c,
                                   const std::vector<double>& f, double shift = 0.0);
// Cyclic tridiagonal solve: row i holds sub[i] (col i-1), diag[i], sup[i]
// (col i+1), indices mod n. Sherman-Morrison around a Thomas sweep.
std::vector<double> solve_cyclic_tridiag(const std::vector<double>& sub,
                                         const std::vector<double>& diag,
                                         const std::vector<double>& sup,
                                         const std::vector<double>& rhs);
}  // namespace detail

}  // namespace flowlab
