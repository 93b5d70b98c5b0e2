#include "flowlab/fourier.hpp"

#include <cmath>

namespace flowlab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double FourierSeries::eval(double x, double period) const {
  double s = base;
  for (const Mode& md : modes) {
    const double w = kTwoPi * md.m / period;
    s += md.amp_cos * std::cos(w * x) + md.amp_sin * std::sin(w * x);
  }
  return s;
}

double FourierSeries::deriv(double x, double period) const {
  double s = 0.0;
  for (const Mode& md : modes) {
    const double w = kTwoPi * md.m / period;
    s += w * (md.amp_sin * std::cos(w * x) - md.amp_cos * std::sin(w * x));
  }
  return s;
}

FourierSeries FourierSeries::random(uint64_t seed, int max_mode, double amplitude) {
  SplitMix64 rng(seed);
  FourierSeries f;
  for (int m = 1; m <= max_mode; ++m) {
    const double w = amplitude / (m * m);
    f.modes.push_back({m, w * rng.symmetric(), w * rng.symmetric()});
  }
  return f;
}

ScalarField sample(const GridSpec& g, const FourierSeries& f) {
  return sample_scalar(g, [&](double x) { return f.eval(x, g.len_x); });
}

}  // namespace flowlab
