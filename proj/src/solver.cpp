#include "monofem/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace monofem {

void SolverConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InputError(std::string("solver configuration: ") + what);
  };
  require(residual_tol > 0.0, "residual_tol must be positive");
  require(max_newton >= 1, "max_newton must be at least 1");
  require(slope_floor > 0.0, "slope_floor must be positive");
  require(armijo_beta > 0.0 && armijo_beta < 1.0, "armijo_beta must lie in (0,1)");
  require(armijo_c > 0.0 && armijo_c < 1.0, "armijo_c must lie in (0,1)");
  require(min_step > 0.0 && min_step <= 1.0, "min_step must lie in (0,1]");
  require(cg_tol > 0.0, "cg_tol must be positive");
  require(cg_maxit >= 0, "cg_maxit must be non-negative");
  require(continuation_sigma0 >= 0.0, "continuation_sigma0 must be non-negative");
  require(quad_degree >= 1 && quad_degree <= 5, "quad_degree must lie in 1..5");
}

SemilinearSystem::SemilinearSystem(MeshPtr mesh, Nonlinearity d, const ScalarField& f,
                                   const SolverConfig& cfg)
    : cfg_(cfg),
      space_(std::move(mesh)),
      d_(std::move(d)),
      quad_(rule_of_degree(cfg.quad_degree)),
      stiffness_(assemble_stiffness(space_, cfg.exec)),
      mass_(assemble_mass(space_, cfg.exec)),
      load_(assemble_load(space_, f, quad_, cfg.exec)),
      num_free_(space_.mesh().num_interior_vertices()) {}

std::vector<double> SemilinearSystem::residual(std::span<const double> u) const {
  std::vector<double> r = assemble_nonlinear_residual(space_, d_, u, quad_, cfg_.exec);
  std::vector<double> au(u.size());
  kernels::spmv(cfg_.exec, stiffness_, u, au);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += au[i] - load_[i];
  zero_boundary_entries(r, space_.mesh());
  return r;
}

double SemilinearSystem::scaled_norm(std::span<const double> r) const {
  if (num_free_ == 0) return 0.0;
  return kernels::norm2(cfg_.exec, r) / std::sqrt(static_cast<double>(num_free_));
}

double SemilinearSystem::residual_norm(std::span<const double> u) const {
  return scaled_norm(residual(u));
}

CsrMatrix SemilinearSystem::linearization(std::span<const double> u, double sigma) const {
  const double tau = cfg_.slope_floor;
  std::vector<double> up(u.begin(), u.end()), um(u.begin(), u.end());
  for (std::size_t i = 0; i < up.size(); ++i) {
    up[i] += tau;
    um[i] -= tau;
  }
  CsrMatrix j = assemble_slope_matrix(space_, d_, up, um, tau, quad_, cfg_.exec);
  j.add_scaled(1.0, stiffness_, 1.0);
  if (sigma != 0.0) j.add_scaled(1.0, mass_, sigma);
  apply_dirichlet(j, {}, space_.mesh());
  return j;
}

namespace {

int cg_limit(const SolverConfig& cfg, std::size_t n) {
  return cfg.cg_maxit > 0 ? cfg.cg_maxit : static_cast<int>(10 * std::max<std::size_t>(n, 1));
}

}  // namespace

SolveResult solve_semilinear(MeshPtr mesh, const Nonlinearity& d, const ScalarField& f,
                             const SolverConfig& cfg, const std::optional<FemFunction>& initial) {
  cfg.validate();
  if (initial && initial->mesh_ptr() != mesh) {
    throw InputError("solve_semilinear: initial guess lives on a different mesh");
  }
  const SemilinearSystem sys(mesh, d, f, cfg);
  const std::size_t n = sys.space().num_dofs();
  const int maxit = cg_limit(cfg, n);
  SolveStats stats;

  std::vector<double> u;
  if (initial) {
    u.assign(initial->coeffs().begin(), initial->coeffs().end());
    zero_boundary_entries(u, *mesh);
  } else {
    // Linear problem with the nonlinearity frozen at u = 0.
    const std::vector<double> zero(n, 0.0);
    std::vector<double> rhs = assemble_nonlinear_residual(sys.space(), d, zero,
                                                          rule_of_degree(cfg.quad_degree), cfg.exec);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = sys.load()[i] - rhs[i];
    CsrMatrix a = sys.stiffness();
    apply_dirichlet(a, rhs, *mesh);
    CgResult cg = cg_solve(a, rhs, cfg.cg_tol, maxit, {}, cfg.exec);
    stats.total_cg_iterations += cg.iterations;
    stats.newton_iterations = 1;
    u = std::move(cg.x);
  }

  std::vector<double> r = sys.residual(u);
  double rnorm = sys.scaled_norm(r);
  stats.residual_history.push_back(rnorm);
  std::vector<double> best = u;
  double best_norm = rnorm;

  auto fail = [&](const std::string& why) -> SolveFailure {
    stats.final_residual_norm = best_norm;
    return SolveFailure(why, FemFunction(mesh, best), stats);
  };

  std::vector<double> rhs(n), trial(n);
  while (rnorm > cfg.residual_tol) {
    if (stats.newton_iterations >= cfg.max_newton) {
      std::ostringstream s;
      s << "Newton did not converge in " << cfg.max_newton << " iterations (best residual "
        << best_norm << ", tolerance " << cfg.residual_tol << ")";
      throw fail(s.str());
    }
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -r[i];

    const CsrMatrix jac = sys.linearization(u);
    CgResult step = cg_solve(jac, rhs, cfg.cg_tol, maxit, {}, cfg.exec);
    stats.total_cg_iterations += step.iterations;

    bool accepted = false;
    std::vector<double> r_trial;
    double trial_norm = 0.0;
    for (double t = 1.0; t >= cfg.min_step; t *= cfg.armijo_beta) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + t * step.x[i];
      r_trial = sys.residual(trial);
      trial_norm = sys.scaled_norm(r_trial);
      if (trial_norm <= (1.0 - cfg.armijo_c * t) * rnorm) {
        accepted = true;
        if (t < 1.0) ++stats.damping_activations;
        break;
      }
    }

    if (!accepted) {
      // Shifted linearization A + B + sigma M; larger sigma gives shorter steps.
      ++stats.continuation_activations;
      double sigma = std::max(cfg.continuation_sigma0, 1e-3);
      for (int k = 0; k <= cfg.max_continuation_doublings && !accepted; ++k, sigma *= 2.0) {
        CgResult shifted = cg_solve(sys.linearization(u, sigma), rhs, cfg.cg_tol, maxit, {}, cfg.exec);
        stats.total_cg_iterations += shifted.iterations;
        for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + shifted.x[i];
        r_trial = sys.residual(trial);
        trial_norm = sys.scaled_norm(r_trial);
        accepted = trial_norm < rnorm;
      }
      if (!accepted) throw fail("Newton stalled: neither line search nor shifted steps reduce the residual");
    }

    u.swap(trial);
    r = std::move(r_trial);
    rnorm = trial_norm;
    ++stats.newton_iterations;
    stats.residual_history.push_back(rnorm);
    if (rnorm < best_norm) {
      best_norm = rnorm;
      best = u;
    }
  }

  stats.final_residual_norm = rnorm;
  return {FemFunction(std::move(mesh), std::move(u)), std::move(stats)};
}

double semilinear_residual_norm(const FemFunction& u, const Nonlinearity& d, const ScalarField& f,
                                const SolverConfig& cfg) {
  const SemilinearSystem sys(u.mesh_ptr(), d, f, cfg);
  return sys.residual_norm(u.coeffs());
}

UniformBoundCheck verify_uniform_bound(const FemFunction& u, const FemFunction& reference) {
  if (!is_descendant(reference.mesh(), u.mesh())) {
    throw InputError("verify_uniform_bound: reference mesh is not nested in the solution mesh");
  }
  UniformBoundCheck c;
  c.uh_max = u.max_abs();
  c.reference_max = reference.max_abs();
  c.ratio = c.reference_max > 0.0 ? c.uh_max / c.reference_max : (c.uh_max > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  c.pass = c.uh_max <= 2.0 * c.reference_max + 1e-10;
  return c;
}

}  // namespace monofem
