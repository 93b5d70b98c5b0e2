#pragma once

#include <string>
#include <vector>

#include "flowlab/geometry.hpp"
#include "flowlab/grid.hpp"

namespace flowlab {

// The evolution is dg/dt = -2 alpha with
//   Static:         alpha = 0
//   Ricci:          alpha = Rc
//   ListExtended:   alpha = Rc - a_n dv (x) dv,          dv/dt = Lap v
//   RicciHarmonic:  alpha = Rc - a(t) dphi (x) dphi,     dphi/dt = Lap phi,
//                   a(t) = a0 - decay * t  (must stay positive on the run)
enum class FlowTag { Static, Ricci, ListExtended, RicciHarmonic };

struct FlowKind {
  FlowTag tag = FlowTag::Static;
  double coupling = 0.0;  // a_n, or a(0) for RicciHarmonic
  double decay = 0.0;     // RicciHarmonic only

  static FlowKind static_metric() { return {FlowTag::Static, 0.0, 0.0}; }
  static FlowKind ricci() { return {FlowTag::Ricci, 0.0, 0.0}; }
  static FlowKind list_extended(double a_n);
  static FlowKind ricci_harmonic(double a0, double decay_rate);

  bool has_aux() const {
    return tag == FlowTag::ListExtended || tag == FlowTag::RicciHarmonic;
  }
  double coupling_at(double t) const;
  double coupling_rate() const;  // d/dt of the coupling
  std::string name() const;
};

// aux is the coupled scalar (v or phi); present exactly when the kind has one.
struct FlowState {
  FlowKind kind;
  double time = 0.0;
  Metric metric;
  ScalarField aux;
};

FlowState make_flow_state(FlowKind kind, double time, Metric metric);
FlowState make_flow_state(FlowKind kind, double time, Metric metric, ScalarField aux);

TensorField alpha(const FlowState& s);
ScalarField trace_a(const FlowState& s);  // A = tr_g alpha

// States stored every dt/2 (RK4 substeps of size dt/2). Full steps sit at even
// indices; the half-step states feed the staged conjugate-heat solve and the
// centered time differences.
struct FlowTrajectory {
  FlowKind kind;
  double dt = 0.0;
  std::vector<FlowState> states;

  int half_count() const { return static_cast<int>(states.size()); }
  int full_count() const { return (half_count() + 1) / 2; }
  const FlowState& half(int i) const { return states.at(static_cast<size_t>(i)); }
  const FlowState& full(int j) const { return states.at(static_cast<size_t>(2 * j)); }
  double t_begin() const { return states.front().time; }
  double t_end() const { return states.back().time; }
};

// Largest stable step for the explicit integrator: cfl * h^2 * min(a),
// divided by the coupling magnitude when it exceeds 1.
double stable_dt(const FlowState& s, double t_end, double cfl = 0.2);

// (t_end - time)/dt must be a whole number (see auto_dt in the runner).
FlowTrajectory evolve(const FlowState& initial, double dt, double t_end);

// A-dot bookkeeping: dA/dt = 2|alpha|^2 + B, so B - Lap A is measurable from
// the trajectory as a centered difference, or from the per-flow closed form:
//   Static, Ricci:  0
//   ListExtended:   2 a_n (Lap v)^2
//   RicciHarmonic:  2 a(t) (Lap phi)^2 - a'(t) |grad phi|^2
ScalarField b_minus_delta_a_closed(const FlowState& s);
ScalarField b_minus_delta_a_numeric(const FlowTrajectory& traj, int half_index);

// 1-form dA - 2 Div(alpha); closed form is 2 a(t) (Lap aux) d(aux) for the
// coupled kinds and 0 for Static/Ricci.
VectorField grad_a_minus_2div_alpha(const FlowState& s);
VectorField grad_a_minus_2div_alpha_closed(const FlowState& s);

// Theta(V) = (Rc - alpha)(V,V) + <dA - 2 Div alpha, V> + (B - Lap A)/2,
// assembled from the generic pieces (bmda supplied by the caller), or from the
// per-flow closed form:
//   Static:         Rc(V,V)
//   Ricci:          0
//   ListExtended:   a_n (<grad v, V> + Lap v)^2
//   RicciHarmonic:  a(t) (Lap phi + <grad phi, V>)^2 - (a'(t)/2) |grad phi|^2
ScalarField theta_general(const FlowState& s, const VectorField& V, const ScalarField& bmda);
ScalarField theta_closed(const FlowState& s, const VectorField& V);

}  // namespace flowlab
