#pragma once

#include <string>
#include <vector>

namespace monofem {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Built-in oracle suite: element matrices, quadrature exactness, mesh and
/// assembly invariants, kernel agreement and the small nonlinear properties
/// (uniqueness, cut-consistency, residual certificate). Runs in a few seconds.
std::vector<CheckResult> run_validation_suite();

}  // namespace monofem
