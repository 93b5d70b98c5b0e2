// Acceptance gate: runs the full verification catalogue and reports one line
// per numbered claim. A claim passes only if every check tied to it passes.
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "flowlab/checks.hpp"

namespace {

const char* describe(int criterion) {
  switch (criterion) {
    case 1: return "shrinking-sphere closed forms (lambda, lambda', E'', constant W)";
    case 2: return "Theta vanishes identically along Ricci flow";
    case 3: return "coupled-flow Theta and B - Lap A: dual paths agree, closed forms >= 0";
    case 4: return "E' and E'' formulas track finite differences; static E is convex";
    case 5: return "F_k derivative formula, monotonicity, and the A-integral identity";
    case 6: return "W and W+ derivative formulas track finite differences, both monotone";
    case 7: return "integration-by-parts lemma behind the eigenvalue rate";
    case 8: return "eigenvalue rate: finite differences, dense oracle, 2-D assembly, flow forms";
    case 9: return "normalized eigenvalue: scale invariance, Holder identity, monotone bound";
    case 10: return "conjugate-heat mass conservation and the volume identity";
    default: return "supporting discretization checks";
  }
}

}  // namespace

int main() {
  std::vector<flowlab::verify::CheckResult> results;
  try {
    results = flowlab::verify::run_checks("all");
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 1;
  }

  std::map<int, std::vector<const flowlab::verify::CheckResult*>> by_criterion;
  for (const auto& r : results) by_criterion[r.criterion].push_back(&r);

  int failed_criteria = 0;
  for (int crit = 1; crit <= 10; ++crit) {
    auto it = by_criterion.find(crit);
    bool ok = it != by_criterion.end();
    if (ok)
      for (const auto* r : it->second) ok = ok && r->pass;
    std::printf("criterion %2d: %s  %s\n", crit, ok ? "pass" : "FAIL", describe(crit));
    if (!ok) {
      ++failed_criteria;
      if (it != by_criterion.end())
        for (const auto* r : it->second)
          if (!r->pass)
            std::printf("              %s/%s measured %.6e tol %.6e\n",
                        r->suite.c_str(), r->name.c_str(), r->measured, r->tol);
    }
  }

  int support_bad = 0;
  if (auto it = by_criterion.find(0); it != by_criterion.end())
    for (const auto* r : it->second)
      if (!r->pass) {
        ++support_bad;
        std::printf("supporting FAIL: %s/%s measured %.6e tol %.6e\n", r->suite.c_str(),
                    r->name.c_str(), r->measured, r->tol);
      }

  std::printf("%d/10 criteria pass, %zu checks total\n", 10 - failed_criteria,
              results.size());
  return (failed_criteria || support_bad) ? 1 : 0;
}
