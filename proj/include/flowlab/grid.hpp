#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "flowlab/errors.hpp"

namespace flowlab {

// Uniform periodic sampling of the rectangle [0, len_x) x [0, len_y).
// Fields vary in x only; the y direction carries a constant factor len_y
// through every integral. n is the x sample count.
struct GridSpec {
  int n = 0;
  double len_x = 0.0;
  double len_y = 0.0;

  double dx() const { return len_x / n; }
  bool operator==(const GridSpec& o) const {
    return n == o.n && len_x == o.len_x && len_y == o.len_y;
  }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

GridSpec make_grid(int n, double len_x, double len_y);
std::vector<double> grid_points(const GridSpec& g);

struct ScalarField {
  GridSpec grid;
  std::vector<double> v;
};

// Contravariant components (V^x, V^y). Ops that produce index-lowered results
// (1-forms) reuse this container and say so at the call site.
struct VectorField {
  GridSpec grid;
  std::vector<double> x, y;
};

// Diagonal symmetric 2-tensor: T = xx dx^2 + yy dy^2.
struct TensorField {
  GridSpec grid;
  std::vector<double> xx, yy;
};

// g = a(x) dx^2 + b(x) dy^2 with a, b > 0.
struct Metric {
  GridSpec grid;
  std::vector<double> a, b;
};

ScalarField make_scalar(const GridSpec& g, double fill = 0.0);
VectorField make_vector(const GridSpec& g, double fx = 0.0, double fy = 0.0);
TensorField make_tensor(const GridSpec& g);
Metric make_metric(const GridSpec& g, std::vector<double> a, std::vector<double> b);
Metric flat_metric(const GridSpec& g);
// a = b = exp(2u)
Metric conformal_metric(const ScalarField& u);

template <class F>
ScalarField sample_scalar(const GridSpec& g, F&& f) {
  ScalarField s{g, std::vector<double>(static_cast<size_t>(g.n))};
  const double h = g.dx();
  for (int i = 0; i < g.n; ++i) s.v[static_cast<size_t>(i)] = f(i * h);
  return s;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);
bool all_finite(const std::vector<double>& v);
double min_value(const std::vector<double>& v);
double max_abs(const std::vector<double>& v);

}  // namespace flowlab
