#pragma once

#include <cstdint>
#include <vector>

#include "flowlab/grid.hpp"
#include "flowlab/rng.hpp"

namespace flowlab {

// Truncated Fourier series on a period. Profiles are defined independently of
// any grid so the same smooth function can be sampled at several resolutions
// (refinement studies) or fed to closed-form derivatives.
struct FourierSeries {
  struct Mode {
    int m = 1;
    double amp_cos = 0.0;
    double amp_sin = 0.0;
  };
  double base = 0.0;
  std::vector<Mode> modes;

  double eval(double x, double period) const;
  double deriv(double x, double period) const;

  bool empty() const { return base == 0.0 && modes.empty(); }

  // Modes 1..max_mode with coefficients uniform in [-amplitude, amplitude],
  // scaled by 1/m^2 so the profile stays smooth at any resolution.
  static FourierSeries random(uint64_t seed, int max_mode, double amplitude);
};

ScalarField sample(const GridSpec& g, const FourierSeries& f);

}  // namespace flowlab
