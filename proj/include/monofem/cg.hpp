#pragma once

#include <span>
#include <vector>

#include "monofem/error.hpp"
#include "monofem/kernels.hpp"
#include "monofem/sparse.hpp"

namespace monofem {

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
  /// Final ||b - A x||_2 (recursively updated residual).
  double residual_norm = 0.0;
  std::vector<double> history;
};

/// Thrown on non-convergence or a non-positive curvature p^T A p <= 0.
class CgFailure : public NumericalError {
 public:
  CgFailure(const std::string& what, std::vector<double> history)
      : NumericalError(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

/// Jacobi-preconditioned conjugate gradients for symmetric positive definite A.
/// Stops when ||b - A x||_2 <= tol * ||b||_2. An empty x0 starts from zero.
CgResult cg_solve(const CsrMatrix& a, std::span<const double> rhs, double tol, int maxit,
                  std::span<const double> x0 = {}, Exec exec = Exec::parallel);

}  // namespace monofem
