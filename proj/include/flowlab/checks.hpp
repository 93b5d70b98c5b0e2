#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flowlab/grid.hpp"

namespace flowlab::verify {

// Lowest eigenvalue of -Lap f + c A f by a dense symmetric solve (the operator
// conjugated by sqrt(measure) is symmetric). Same stencil as the iterative
// path, different algorithm; serves as its oracle in tests and self checks.
double dense_lowest_eigenvalue(const Metric& g, const ScalarField& A, double c);

// One named check from the fixed catalogue. measured is compared against tol
// after the tolerance scale is applied; criterion ties the check to the
// numbered acceptance list (0 = supporting check).
struct CheckResult {
  std::string name;
  std::string suite;
  int criterion = 0;
  double measured = 0.0;
  double tol = 0.0;
  bool pass = false;
};

// suite: geometry | flows | heat | entropy | spectrum | all. Pinned grids and
// seeds; seed perturbs the randomized probe fixtures (0 keeps the pinned ones).
std::vector<CheckResult> run_checks(const std::string& suite, double tol_scale = 1.0,
                                    uint64_t seed = 0);

}  // namespace flowlab::verify
