#include "flowlab/grid.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace flowlab {

GridSpec make_grid(int n, double len_x, double len_y) {
  if (n < 16 || n % 2 != 0)
    throw ConfigError("grid.n must be even and >= 16, got " + std::to_string(n));
  if (!(len_x > 0.0) || !(len_y > 0.0))
    throw ConfigError("grid lengths must be positive");
  return GridSpec{n, len_x, len_y};
}

std::vector<double> grid_points(const GridSpec& g) {
  std::vector<double> x(static_cast<size_t>(g.n));
  const double h = g.dx();
  for (int i = 0; i < g.n; ++i) x[static_cast<size_t>(i)] = i * h;
  return x;
}

ScalarField make_scalar(const GridSpec& g, double fill) {
  return ScalarField{g, std::vector<double>(static_cast<size_t>(g.n), fill)};
}

VectorField make_vector(const GridSpec& g, double fx, double fy) {
  return VectorField{g, std::vector<double>(static_cast<size_t>(g.n), fx),
                     std::vector<double>(static_cast<size_t>(g.n), fy)};
}

TensorField make_tensor(const GridSpec& g) {
  return TensorField{g, std::vector<double>(static_cast<size_t>(g.n), 0.0),
                     std::vector<double>(static_cast<size_t>(g.n), 0.0)};
}

Metric make_metric(const GridSpec& g, std::vector<double> a, std::vector<double> b) {
  if (a.size() != static_cast<size_t>(g.n) || b.size() != static_cast<size_t>(g.n))
    throw ConfigError("metric component size does not match grid");
  if (!all_finite(a) || !all_finite(b) || min_value(a) <= 0.0 || min_value(b) <= 0.0)
    throw ConfigError("metric components must be finite and positive");
  return Metric{g, std::move(a), std::move(b)};
}

Metric flat_metric(const GridSpec& g) {
  return Metric{g, std::vector<double>(static_cast<size_t>(g.n), 1.0),
                std::vector<double>(static_cast<size_t>(g.n), 1.0)};
}

Metric conformal_metric(const ScalarField& u) {
  std::vector<double> a(u.v.size());
  for (size_t i = 0; i < u.v.size(); ++i) a[i] = std::exp(2.0 * u.v[i]);
  return make_metric(u.grid, a, a);
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
  if (a != b) throw ConfigError(std::string("grid mismatch in ") + where);
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

double min_value(const std::vector<double>& v) {
  double m = std::numeric_limits<double>::infinity();
  for (double x : v) m = std::min(m, x);
  return m;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace flowlab
