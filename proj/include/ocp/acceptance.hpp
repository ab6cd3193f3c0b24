// Acceptance suite: ten pass/fail checks covering manufactured convergence
// rates, estimator stability, adaptive behavior, derivative consistency,
// structural invariants, and CSV determinism. Every threshold is pinned in
// the implementation; the suite passes only if all ten criteria do.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ocp {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;   ///< measured values and the required window
  double seconds = 0.0;
};

/// Runs the ten criteria in order. `cliPath` must point at the command-line
/// binary; the determinism criterion spawns it twice. Failures (including
/// exceptions and exceeded per-criterion time budgets) are captured in the
/// results, never thrown.
std::vector<CriterionResult> run_acceptance(const std::string& cliPath);

bool all_passed(const std::vector<CriterionResult>& results);

/// One PASS/FAIL line per criterion plus a summary line.
void print_report(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace ocp
