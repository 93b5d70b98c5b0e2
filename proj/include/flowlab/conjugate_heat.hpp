#pragma once

#include <vector>

#include "flowlab/flows.hpp"

namespace flowlab {

// Solution of du/dt = -Lap u + A u marched backward from terminal data at the
// trajectory's final time. u[j] lives at the j-th full step of the trajectory
// (ascending times). Mass integral(u dy) is conserved by the equation; the
// solver checks it at every stored state and refuses to continue on drift.
struct HeatSolution {
  double dt = 0.0;
  double mass = 0.0;
  std::vector<double> times;
  std::vector<ScalarField> u;
};

// terminal must be strictly positive. normalize scales it to unit mass under
// the final metric. Positivity of the solution is enforced, not clamped: a
// non-positive value aborts with the time at which it appeared.
HeatSolution solve_backward(const FlowTrajectory& traj, const ScalarField& terminal,
                            bool normalize = true);

struct LogFields {
  ScalarField log_u;
  ScalarField grad_sq;  // |grad log u|^2
  TensorField hess;     // Hess(log u)
};
LogFields log_fields(const Metric& g, const ScalarField& u);

}  // namespace flowlab
