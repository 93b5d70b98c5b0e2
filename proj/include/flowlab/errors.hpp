#pragma once

#include <stdexcept>
#include <string>

namespace flowlab {

// Bad input: malformed config text, out-of-domain parameters, mismatched grids,
// violated preconditions. CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure during a computation: metric lost positivity, solution blew
// up, conservation broke down. Carries the simulation time at which it happened.
// CLI maps this to exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg, double when = 0.0)
      : std::runtime_error(msg), time(when) {}
  double time;
};

// An iterative solver stalled before reaching its tolerance.
struct ConvergenceError : NumericError {
  ConvergenceError(const std::string& msg, double res)
      : NumericError(msg), residual(res) {}
  double residual;
};

}  // namespace flowlab
