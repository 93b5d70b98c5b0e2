#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "flowlab/conjugate_heat.hpp"
#include "flowlab/flows.hpp"

namespace flowlab {

// Boltzmann-Shannon entropy and its two derivative formulas. u must be a
// positive density (unit mass for the normalized identities).
double entropy_E(const Metric& g, const ScalarField& u);
// dE/dt = integral (|grad log u|^2 + A) u dy
double entropy_E1(const FlowState& s, const ScalarField& u);
// d2E/dt2 = 2 integral (|alpha - Hess log u|^2 + Theta(grad log u)) u dy
double entropy_E2(const FlowState& s, const ScalarField& u, const ScalarField& bmda);

// F_k(phi) = integral (|grad phi|^2 + k A) e^{-phi} dy, integral e^{-phi} = 1.
double f_functional(const FlowState& s, const ScalarField& phi, double k);
double f_derivative_formula(const FlowState& s, const ScalarField& phi, double k,
                            const ScalarField& bmda);

// d/dt integral(A u dy) = integral (2|alpha|^2 + (B - Lap A)) u dy.
// Returns (centered difference, formula) at an interior full step.
std::pair<double, double> au_identity(const FlowTrajectory& traj, const HeatSolution& heat,
                                      int full_index);

// Shrinker entropy, tau = T_ref - t > 0:
//   W = integral (tau (|grad phi|^2 + A) + phi - n) u dy,  phi = -log((4 pi tau)^{n/2} u)
// and its derivative formula
//   dW/dt = 2 tau integral (|alpha - Hess log u - g/(2 tau)|^2 + Theta(grad log u)) u dy.
double w_entropy(const FlowState& s, const ScalarField& u, double T_ref);
double w_derivative_formula(const FlowState& s, const ScalarField& u, double T_ref,
                            const ScalarField& bmda);

// Expander entropy, sigma = t - T_ref > 0, with the opposite signs:
//   W+ = integral (sigma (|grad phi|^2 + A) - phi + n) u dy
//   dW+/dt = 2 sigma integral (|alpha - Hess log u + g/(2 sigma)|^2 + Theta) u dy.
double w_plus_entropy(const FlowState& s, const ScalarField& u, double T_ref);
double w_plus_derivative_formula(const FlowState& s, const ScalarField& u, double T_ref,
                                 const ScalarField& bmda);

struct SeriesSpec {
  std::vector<double> k_list{1.0, 2.0, 4.0};
  std::optional<double> T_ref;       // shrinker reference time
  std::optional<double> T_plus_ref;  // expander reference time
  int stride = 1;                    // evaluate every stride-th full step
  bool bmda_numeric = false;         // centered-difference B - Lap A instead of closed form
};

// Column-oriented table over the sampled full steps. Cells that are undefined
// at a given time (tau <= 0, sigma <= 0) hold NaN and are emitted as empty
// CSV cells downstream.
struct EntropySeries {
  std::vector<int> full_index;
  std::vector<double> t, vol, E, E1, E2;
  std::vector<double> k_list;
  std::vector<std::vector<double>> F, dF;  // [k][row]
  std::vector<double> W, dW, Wp, dWp;
  std::vector<double> min_theta, min_bmda;
};

EntropySeries build_series(const FlowTrajectory& traj, const HeatSolution& heat,
                           const SeriesSpec& spec);

}  // namespace flowlab
