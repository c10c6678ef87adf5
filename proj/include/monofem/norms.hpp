#pragma once

#include <optional>

#include "monofem/fem_function.hpp"
#include "monofem/kernels.hpp"
#include "monofem/quadrature.hpp"

namespace monofem {

/// Closed-form truth: value and gradient.
struct ExactSolution {
  ScalarField value;
  VectorField gradient;
};

/// ||u_h - truth||_{L2}. Callable truth: per-element quadrature (degree >= 4
/// required). Discrete truth on a nested refinement: u_h is prolongated and the
/// P1 difference is integrated exactly.
double error_l2(const FemFunction& uh, const ScalarField& truth, const QuadRule& quad = seven_point_rule(),
                Exec exec = Exec::parallel);
double error_l2(const FemFunction& uh, const FemFunction& truth, Exec exec = Exec::parallel);

/// ||grad(u_h - truth)||_{L2}.
double error_h1semi(const FemFunction& uh, const VectorField& grad_truth,
                    const QuadRule& quad = seven_point_rule(), Exec exec = Exec::parallel);
double error_h1semi(const FemFunction& uh, const FemFunction& truth, Exec exec = Exec::parallel);

/// Max |u_h - truth| over the vertices and a barycentric lattice of the given
/// degree in every triangle (degree 4: 15 points per triangle).
double error_linf(const FemFunction& uh, const ScalarField& truth, int lattice_degree = 4,
                  Exec exec = Exec::parallel);
/// Discrete truth: the difference is P1 on the fine mesh, so the vertex maximum is exact.
double error_linf(const FemFunction& uh, const FemFunction& truth, Exec exec = Exec::parallel);

struct RitzOptions {
  double cg_tol = 1e-12;
  int cg_maxit = 0;  // 0: 10 * number of vertices
  Exec exec = Exec::parallel;
};

/// R_h u in V_h with (grad(u - R_h u), grad phi_h) = 0 for all phi_h in V_h,
/// the right-hand side integrated from grad_truth by quadrature.
FemFunction ritz_project(const MeshPtr& mesh, const VectorField& grad_truth,
                         const QuadRule& quad = seven_point_rule(), const RitzOptions& opts = {});

/// Right-hand side G_i = (grad_truth, grad phi_i) used by ritz_project.
std::vector<double> ritz_rhs(const MeshPtr& mesh, const VectorField& grad_truth, const QuadRule& quad,
                             Exec exec = Exec::parallel);

/// ln(e_c/e_f) / ln(h_c/h_f); nullopt unless all inputs are positive and finite
/// and h_f < h_c.
std::optional<double> eoc(double e_coarse, double e_fine, double h_coarse, double h_fine);

/// EOC of e / |ln h|^log_power, matching rates of the form h^p |ln h|^k.
/// Requires h < 1.
std::optional<double> eoc_log_corrected(double e_coarse, double e_fine, double h_coarse, double h_fine,
                                        int log_power);

}  // namespace monofem
