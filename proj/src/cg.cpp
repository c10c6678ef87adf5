#include "monofem/cg.hpp"

#include <cmath>
#include <sstream>

namespace monofem {

CgResult cg_solve(const CsrMatrix& a, std::span<const double> rhs, double tol, int maxit,
                  std::span<const double> x0, Exec exec) {
  const std::size_t n = a.n;
  if (rhs.size() != n || (!x0.empty() && x0.size() != n)) {
    throw InputError("cg_solve: dimension mismatch");
  }
  CgResult res;
  res.x.assign(n, 0.0);
  if (!x0.empty()) res.x.assign(x0.begin(), x0.end());

  std::vector<double> inv_diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a.diagonal(i);
    if (!(d > 0.0)) {
      std::ostringstream s;
      s << "cg_solve: non-positive diagonal " << d << " in row " << i;
      throw CgFailure(s.str(), {});
    }
    inv_diag[i] = 1.0 / d;
  }

  std::vector<double> r(n), z(n), p(n), ap(n);
  kernels::spmv(exec, a, res.x, ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ap[i];

  const double target = tol * kernels::norm2(exec, rhs);
  double rnorm = kernels::norm2(exec, r);
  res.history.push_back(rnorm);
  if (rnorm <= target || rnorm == 0.0) {
    res.residual_norm = rnorm;
    return res;
  }

  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = kernels::dot(exec, r, z);
  for (int it = 1; it <= maxit; ++it) {
    kernels::spmv(exec, a, p, ap);
    const double pap = kernels::dot(exec, p, ap);
    if (!(pap > 0.0)) {
      std::ostringstream s;
      s << "cg_solve: non-positive curvature p^T A p = " << pap << " at iteration " << it
        << " (matrix not positive definite)";
      throw CgFailure(s.str(), std::move(res.history));
    }
    const double alpha = rz / pap;
    kernels::axpy(exec, alpha, p, res.x);
    kernels::axpy(exec, -alpha, ap, r);
    rnorm = kernels::norm2(exec, r);
    res.history.push_back(rnorm);
    res.iterations = it;
    if (rnorm <= target) {
      res.residual_norm = rnorm;
      return res;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = kernels::dot(exec, r, z);
    kernels::xpby(exec, z, rz_next / rz, p);
    rz = rz_next;
  }
  std::ostringstream s;
  s << "cg_solve: no convergence in " << maxit << " iterations (residual " << rnorm
    << ", target " << target << ")";
  throw CgFailure(s.str(), std::move(res.history));
}

}  // namespace monofem
