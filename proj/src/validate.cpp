#include "monofem/validate.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "monofem/assembly.hpp"
#include "monofem/norms.hpp"
#include "monofem/solver.hpp"

namespace monofem {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

MeshPtr reference_triangle() { return TriMesh::create({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}); }

double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

CheckResult element_stiffness() {
  const P1Space space(reference_triangle());
  const CsrMatrix a = assemble_stiffness(space);
  const double want[3][3] = {{1, -0.5, -0.5}, {-0.5, 0.5, 0}, {-0.5, 0, 0.5}};
  double err = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) err = std::max(err, std::abs(a.at(i, j) - want[i][j]));
  return {"element stiffness matrix", err <= 1e-14, fmt("max error %.2e", err)};
}

CheckResult element_mass() {
  const P1Space space(reference_triangle());
  const CsrMatrix closed = assemble_mass(space);
  const CsrMatrix quad = assemble_mass_quadrature(space, edge_midpoint_rule());
  double err = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const double want = (i == j ? 2.0 : 1.0) / 24.0;
      err = std::max({err, std::abs(closed.at(i, j) - want), std::abs(quad.at(i, j) - want)});
    }
  return {"element mass matrix", err <= 1e-14, fmt("max error %.2e", err)};
}

CheckResult quadrature_exactness() {
  double worst = 0.0;
  for (const QuadRule* rule : shipped_rules()) {
    for (int a = 0; a <= rule->degree; ++a)
      for (int b = 0; a + b <= rule->degree; ++b) {
        double s = 0.0;
        for (std::size_t q = 0; q < rule->size(); ++q) {
          s += rule->weights[q] * std::pow(rule->points[q][1], a) * std::pow(rule->points[q][2], b);
        }
        const double exact = 2.0 * factorial(a) * factorial(b) / factorial(a + b + 2);
        worst = std::max(worst, std::abs(s - exact) / exact);
      }
  }
  return {"quadrature exactness", worst <= 1e-13, fmt("max relative error %.2e", worst)};
}

CheckResult refinement_invariants() {
  const Polygon poly = preset_polygon("paper-pentagon");
  MeshPtr m = triangulate_convex_polygon(poly);
  const double angle0 = min_angle(*m);
  const double area = polygon_area(poly);
  bool ok = true;
  for (int level = 1; level <= 4 && ok; ++level) {
    const MeshPtr fine = refine_uniform(m);
    ok = !check_conformity(*fine) && fine->num_triangles() == 4 * m->num_triangles() &&
         std::abs(total_area(*fine) - area) <= 1e-13 && std::abs(min_angle(*fine) - angle0) <= 1e-12 &&
         is_descendant(*fine, *m) && std::abs(mesh_size(*fine) - 0.5 * mesh_size(*m)) <= 1e-14;
    m = fine;
  }
  return {"red refinement: conformity, area, angles, nesting", ok, ""};
}

CheckResult stiffness_structure() {
  const P1Space space(refine_uniform(triangulate_convex_polygon(preset_polygon("paper-pentagon")), 3));
  const CsrMatrix a = assemble_stiffness(space);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.n; ++i) {
    double s = 0.0;
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) s += a.values[k];
    worst = std::max(worst, std::abs(s));
  }
  const bool ok = worst <= 1e-12 && a.is_symmetric(1e-14);
  return {"stiffness row sums and symmetry", ok, fmt("max row sum %.2e", worst)};
}

CheckResult linear_nonlinear_term() {
  const MeshPtr mesh = refine_uniform(triangulate_convex_polygon(preset_polygon("unit-square")), 2);
  const P1Space space(mesh);
  const FemFunction u = interpolate(mesh, [](Point2 p) { return std::cos(3 * p.x) + p.y * p.y; });
  const auto n = assemble_nonlinear_residual(space, linear_nonlinearity(1.0), u.coeffs(), seven_point_rule());
  const CsrMatrix m = assemble_mass(space);
  std::vector<double> mu(u.size());
  kernels::serial::spmv(m, u.coeffs(), mu);
  const double err = max_diff(n, mu);
  return {"N(U) with d = u equals M U", err <= 1e-14, fmt("max difference %.2e", err)};
}

CheckResult kink_slope() {
  const MeshPtr mesh = refine_uniform(triangulate_convex_polygon(preset_polygon("unit-square")), 1);
  const P1Space space(mesh);
  const double tau = 1e-6;
  const std::vector<double> u(mesh->num_vertices(), -1.0 + tau), v(mesh->num_vertices(), -1.0 - tau);
  const CsrMatrix b = assemble_slope_matrix(space, benchmark_nonlinearity(), u, v, tau, seven_point_rule());
  const CsrMatrix m = assemble_mass(space);
  const double want = 50.0 * std::pow(tau, -2.0 / 3.0);
  double worst = 0.0;
  for (std::size_t k = 0; k < b.nnz(); ++k) worst = std::max(worst, std::abs(b.values[k] / m.values[k] - want) / want);
  return {"slope weight at the kink is 50 tau^(-2/3)", worst <= 1e-9, fmt("max relative error %.2e", worst)};
}

CheckResult parallel_matches_serial() {
  const MeshPtr mesh = refine_uniform(triangulate_convex_polygon(preset_polygon("paper-pentagon")), 5);
  const P1Space space(mesh);
  const CsrMatrix ap = assemble_stiffness(space, Exec::parallel);
  const CsrMatrix as = assemble_stiffness(space, Exec::serial);
  const auto f = [](Point2 p) { return std::exp(p.x - p.y); };
  const auto fp = assemble_load(space, f, seven_point_rule(), Exec::parallel);
  const auto fs = assemble_load(space, f, seven_point_rule(), Exec::serial);
  // Assembly is bitwise; blocked reductions agree to rounding.
  const double dp = kernels::dot(Exec::parallel, fp, fp), ds = kernels::dot(Exec::serial, fs, fs);
  const bool ok = ap.values == as.values && fp == fs && std::abs(dp - ds) <= 1e-14 * ds;
  return {"OpenMP kernels agree with the serial reference", ok, fmt("dot relative difference %.2e", std::abs(dp - ds) / ds)};
}

CheckResult cg_two_by_two() {
  CsrMatrix a;
  a.n = 2;
  a.row_ptr = {0, 2, 4};
  a.cols = {0, 1, 0, 1};
  a.values = {4, 1, 1, 3};
  const std::vector<double> rhs = {1, 2};
  const CgResult r = cg_solve(a, rhs, 1e-14, 10);
  const double err = std::max(std::abs(r.x[0] - 1.0 / 11), std::abs(r.x[1] - 7.0 / 11));
  return {"CG on [[4,1],[1,3]] x = [1,2]", err <= 1e-14, fmt("max error %.2e", err)};
}

CheckResult nonlinearity_examples() {
  const Nonlinearity d = benchmark_nonlinearity();
  const Point2 x{0.3, 0.4};
  const Nonlinearity c = cut(linear_nonlinearity(1.0), 1.0);
  const Nonlinearity cube = cut(Nonlinearity([](Point2, double u) { return u * u * u; }, "u^3"), 2.0);
  const bool ok = d(x, 0.0) == 50.0 && d(x, -1.0) == 0.0 && std::abs(d(x, 7.0) - 100.0) <= 1e-12 &&
                  c(x, 2.0) == 1.0 && cube(x, -5.0) == -8.0;
  const std::vector<Point2> pts = {{0, 0}, {0.5, 0.5}, {1, 0.25}};
  const bool mono = check_monotone(d, pts, -5, 5, 401).pass && check_monotone(cut(d, 2.0), pts, -5, 5, 401).pass &&
                    !check_monotone(Nonlinearity([](Point2, double u) { return -u; }, "-u"), pts, -1, 1, 3).pass;
  return {"power law, cut and monotonicity examples", ok && mono, ""};
}

const ScalarField kOne = [](Point2) { return 1.0; };

MeshPtr benchmark_mesh(int level) {
  return refine_uniform(triangulate_convex_polygon(preset_polygon("paper-pentagon")), level);
}

CheckResult residual_certificate() {
  const MeshPtr mesh = benchmark_mesh(3);
  const SolveResult r = solve_semilinear(mesh, benchmark_nonlinearity(), kOne);
  const double fresh = semilinear_residual_norm(r.solution, benchmark_nonlinearity(), kOne);
  const double rel = std::abs(fresh - r.stats.final_residual_norm) / std::max(fresh, 1e-300);
  const bool ok = r.stats.final_residual_norm <= 1e-10 && rel <= 1e-13 && r.solution.satisfies_dirichlet();
  return {"benchmark solve: residual certificate", ok, fmt("residual %.2e, recomputed %.2e", r.stats.final_residual_norm, fresh)};
}

CheckResult uniqueness() {
  const MeshPtr mesh = benchmark_mesh(4);
  const Nonlinearity d = benchmark_nonlinearity();
  const SolveResult a = solve_semilinear(mesh, d, kOne);
  FemFunction guess = interpolate(mesh, [](Point2 p) { return 0.1 * p.x * p.y; });
  guess.zero_boundary();
  const SolveResult b = solve_semilinear(mesh, d, kOne, {}, guess);
  const double diff = max_diff(a.solution.coeffs(), b.solution.coeffs());
  return {"uniqueness from two initial guesses", diff <= 1e-8, fmt("max difference %.2e", diff)};
}

CheckResult cut_consistency() {
  const MeshPtr mesh = benchmark_mesh(4);
  const Nonlinearity d = benchmark_nonlinearity();
  const SolveResult a = solve_semilinear(mesh, d, kOne);
  const double M = 2.0 * a.solution.max_abs() + 1.0;
  const SolveResult b = solve_semilinear(mesh, cut(d, M), kOne);
  const double diff = max_diff(a.solution.coeffs(), b.solution.coeffs());
  return {"cut nonlinearity reproduces the uncut solution", diff <= 1e-8, fmt("max difference %.2e", diff)};
}

CheckResult linear_consistency() {
  const MeshPtr mesh = refine_uniform(triangulate_convex_polygon(preset_polygon("unit-square")), 3);
  const SolveResult r = solve_semilinear(mesh, linear_nonlinearity(2.0), kOne, {}, FemFunction::zero(mesh));
  const bool ok = r.stats.newton_iterations == 1 && r.stats.damping_activations == 0;
  return {"linear d: one Newton step from zero", ok, fmt("residual %.2e", r.stats.final_residual_norm)};
}

CheckResult prolongation_and_norms() {
  const MeshPtr coarse = refine_uniform(triangulate_convex_polygon(preset_polygon("unit-square")), 2);
  const MeshPtr fine = refine_uniform(coarse, 2);
  const FemFunction u = interpolate(coarse, [](Point2 p) { return p.x * (1 - p.x) * std::sin(3 * p.y); });
  const FemFunction zc = FemFunction::zero(coarse);
  const FemFunction pu = prolongate(u, fine);
  const double l2 = error_l2(zc, u), l2_fine = error_l2(FemFunction::zero(fine), pu);
  const double h1 = error_h1semi(zc, u), h1_fine = error_h1semi(FemFunction::zero(fine), pu);
  const double self = error_l2(u, pu) + error_h1semi(u, pu) + error_linf(u, pu);
  const bool ok = std::abs(l2 - l2_fine) <= 1e-14 && std::abs(h1 - h1_fine) <= 1e-13 && self <= 1e-13;
  return {"prolongation preserves norms", ok, fmt("L2 %.2e, H1 %.2e", std::abs(l2 - l2_fine), std::abs(h1 - h1_fine))};
}

CheckResult eoc_examples() {
  const auto close = [](std::optional<double> v, double want) { return v && std::abs(*v - want) <= 1e-12; };
  const auto e = [](double h) { return h * h * std::log(h) * std::log(h); };
  const bool ok = close(eoc(0.04, 0.01, 0.1, 0.05), 2.0) && close(eoc(0.2, 0.1, 0.2, 0.1), 1.0) &&
                  close(eoc(0.3, 0.3, 0.2, 0.1), 0.0) && !eoc(0.0, 0.1, 0.2, 0.1) &&
                  close(eoc_log_corrected(e(0.1), e(0.05), 0.1, 0.05, 2), 2.0);
  return {"EOC examples", ok, ""};
}

CheckResult manufactured_l2_error() {
  constexpr double pi = std::numbers::pi;
  const MeshPtr mesh = refine_uniform(triangulate_convex_polygon(preset_polygon("unit-square")), 3);
  const double e = error_l2(FemFunction::zero(mesh), [](Point2 p) { return std::sin(pi * p.x) * std::sin(pi * p.y); });
  return {"L2 norm of sin(pi x) sin(pi y) is 1/2", std::abs(e - 0.5) <= 1e-6, fmt("got %.12f", e)};
}

}  // namespace

std::vector<CheckResult> run_validation_suite() {
  std::vector<CheckResult> out;
  auto guarded = [&](const char* name, const std::function<CheckResult()>& check) {
    try {
      out.push_back(check());
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  guarded("element stiffness matrix", element_stiffness);
  guarded("element mass matrix", element_mass);
  guarded("quadrature exactness", quadrature_exactness);
  guarded("red refinement", refinement_invariants);
  guarded("stiffness row sums and symmetry", stiffness_structure);
  guarded("N(U) with d = u", linear_nonlinear_term);
  guarded("slope weight at the kink", kink_slope);
  guarded("OpenMP kernels", parallel_matches_serial);
  guarded("CG 2x2", cg_two_by_two);
  guarded("nonlinearity examples", nonlinearity_examples);
  guarded("EOC examples", eoc_examples);
  guarded("L2 norm of sin(pi x) sin(pi y)", manufactured_l2_error);
  guarded("prolongation", prolongation_and_norms);
  guarded("linear consistency", linear_consistency);
  guarded("residual certificate", residual_certificate);
  guarded("uniqueness", uniqueness);
  guarded("cut consistency", cut_consistency);
  return out;
}

}  // namespace monofem
