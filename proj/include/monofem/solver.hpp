#pragma once

#include <optional>
#include <span>
#include <vector>

#include "monofem/assembly.hpp"
#include "monofem/cg.hpp"
#include "monofem/error.hpp"
#include "monofem/fem_function.hpp"
#include "monofem/nonlinearity.hpp"

namespace monofem {

struct SolverConfig {
  /// Absolute tolerance on ||A U + N(U) - F||_2 / sqrt(ndof) over free vertices.
  double residual_tol = 1e-10;
  int max_newton = 50;
  /// Half-width of the symmetric difference quotient and floor of its denominator.
  double slope_floor = 1e-6;
  double armijo_beta = 0.5;
  double armijo_c = 1e-4;
  double min_step = 1.0 / 1048576.0;  // 2^-20
  double cg_tol = 1e-12;
  /// 0 selects 10 * number of vertices.
  int cg_maxit = 0;
  /// Starting shift of the sigma*M fallback; values below 1e-3 start at 1e-3.
  double continuation_sigma0 = 0.0;
  int max_continuation_doublings = 60;
  /// Degree of the rule used for the load, N(U) and the slope matrix.
  int quad_degree = 5;
  Exec exec = Exec::parallel;

  /// Throws InputError on non-positive tolerances or iteration limits.
  void validate() const;
};

struct SolveStats {
  /// Linear solves of the iteration; the default initial guess counts as one.
  int newton_iterations = 0;
  int total_cg_iterations = 0;
  double final_residual_norm = 0.0;
  int damping_activations = 0;
  int continuation_activations = 0;
  std::vector<double> residual_history;
};

struct SolveResult {
  FemFunction solution;
  SolveStats stats;
};

/// Newton did not reach the tolerance; carries the iterate with the smallest
/// residual seen.
class SolveFailure : public NumericalError {
 public:
  SolveFailure(const std::string& what, FemFunction best, SolveStats stats)
      : NumericalError(what), best_(std::move(best)), stats_(std::move(stats)) {}
  const FemFunction& best_iterate() const { return best_; }
  const SolveStats& stats() const { return stats_; }

 private:
  FemFunction best_;
  SolveStats stats_;
};

/// Algebraic image of  (grad u, grad phi) + (d(u), phi) = (f, phi)  on V_h.
class SemilinearSystem {
 public:
  SemilinearSystem(MeshPtr mesh, Nonlinearity d, const ScalarField& f, const SolverConfig& cfg);

  const P1Space& space() const { return space_; }
  const CsrMatrix& stiffness() const { return stiffness_; }
  const CsrMatrix& mass() const { return mass_; }
  const std::vector<double>& load() const { return load_; }
  const Nonlinearity& nonlinearity() const { return d_; }
  std::size_t num_free() const { return num_free_; }

  /// A U + N(U) - F with boundary rows zeroed.
  std::vector<double> residual(std::span<const double> u) const;
  /// Euclidean norm of residual(u) divided by sqrt(num_free()).
  double residual_norm(std::span<const double> u) const;
  double scaled_norm(std::span<const double> r) const;

  /// A + B(U) + sigma M with Dirichlet rows eliminated, where B is the slope
  /// matrix between U + floor and U - floor.
  CsrMatrix linearization(std::span<const double> u, double sigma = 0.0) const;

 private:
  SolverConfig cfg_;
  P1Space space_;
  Nonlinearity d_;
  const QuadRule& quad_;
  CsrMatrix stiffness_;
  CsrMatrix mass_;
  std::vector<double> load_;
  std::size_t num_free_;
};

/// Damped Newton with floored-slope linearization. Without an initial guess,
/// starts from the solution of the linear problem with d(., 0) frozen.
SolveResult solve_semilinear(MeshPtr mesh, const Nonlinearity& d, const ScalarField& f,
                             const SolverConfig& cfg = {},
                             const std::optional<FemFunction>& initial = std::nullopt);

/// Residual norm recomputed from fresh assemblies.
double semilinear_residual_norm(const FemFunction& u, const Nonlinearity& d, const ScalarField& f,
                                const SolverConfig& cfg = {});

struct UniformBoundCheck {
  bool pass = false;
  double uh_max = 0.0;
  double reference_max = 0.0;
  /// uh_max / reference_max (0 when both vanish).
  double ratio = 0.0;
};

/// ||U||_inf <= 2 ||reference||_inf + 1e-10, with the reference living on U's
/// mesh or a refinement of it.
UniformBoundCheck verify_uniform_bound(const FemFunction& u, const FemFunction& reference);

}  // namespace monofem
