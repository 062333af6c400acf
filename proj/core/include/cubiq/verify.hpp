#pragma once

#include <string>
#include <vector>

namespace cubiq {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

/// The acceptance criteria as callable checks; quick mode shrinks the
/// domains for interactive runs, the full suite uses the stated parameters.
std::vector<CheckResult> run_acceptance(bool quick = false);
CheckResult acceptance_dirichlet(bool quick);
CheckResult acceptance_denominator_counts(bool quick);
CheckResult acceptance_divisibility(bool quick);
CheckResult acceptance_shrinking(bool quick);
CheckResult acceptance_multilinear(bool quick);
CheckResult acceptance_sgamma_bound(bool quick);
CheckResult acceptance_desk_asymptotic(bool quick);
CheckResult acceptance_ledger(bool quick);
CheckResult acceptance_lines(bool quick);
CheckResult acceptance_orthogonality(bool quick);

}  // namespace cubiq
