#include "monofem/norms.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "monofem/assembly.hpp"
#include "monofem/cg.hpp"
#include "monofem/error.hpp"

namespace monofem {

namespace {

// Deterministic sum over elements: per-element values, blocked reduction.
double sum_elements(Exec exec, std::size_t ne, const auto& per_element) {
  std::vector<double> vals(ne);
  kernels::for_each_index(exec, ne, [&](std::size_t e) { vals[e] = per_element(e); });
  const std::vector<double> ones(ne, 1.0);
  return kernels::dot(exec, vals, ones);
}

double max_elements(Exec exec, std::size_t ne, const auto& per_element) {
  std::vector<double> vals(ne);
  kernels::for_each_index(exec, ne, [&](std::size_t e) { vals[e] = per_element(e); });
  return kernels::max_abs(exec, vals);
}

FemFunction difference_on_truth_mesh(const FemFunction& uh, const FemFunction& truth) {
  if (!is_descendant(truth.mesh(), uh.mesh())) {
    throw InputError("discrete truth must live on the same mesh or a nested refinement of it");
  }
  FemFunction diff = prolongate(uh, truth.mesh_ptr());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= truth[i];
  return diff;
}

Point2 p1_gradient(const P1Space& space, const FemFunction& u, std::size_t e) {
  const auto& tri = space.mesh().triangle(e);
  Point2 g{};
  for (int k = 0; k < 3; ++k) g = g + u[static_cast<std::size_t>(tri[k])] * space.grad_basis(e, k);
  return g;
}

void require_degree(const QuadRule& quad) {
  if (quad.degree < 4) throw InputError("error norms against a callable truth need quadrature degree >= 4");
}

}  // namespace

double error_l2(const FemFunction& uh, const ScalarField& truth, const QuadRule& quad, Exec exec) {
  require_degree(quad);
  const P1Space space(uh.mesh_ptr());
  const double sq = sum_elements(exec, space.num_elements(), [&](std::size_t e) {
    double s = 0.0;
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const auto& l = quad.points[q];
      const double d = uh.value_in(e, l) - truth(space.map_point(e, l));
      s += quad.weights[q] * d * d;
    }
    return space.area(e) * s;
  });
  return std::sqrt(sq);
}

double error_l2(const FemFunction& uh, const FemFunction& truth, Exec exec) {
  const FemFunction diff = difference_on_truth_mesh(uh, truth);
  const TriMesh& mesh = diff.mesh();
  const double sq = sum_elements(exec, mesh.num_triangles(), [&](std::size_t e) {
    const auto& t = mesh.triangle(e);
    const double a = diff[static_cast<std::size_t>(t[0])];
    const double b = diff[static_cast<std::size_t>(t[1])];
    const double c = diff[static_cast<std::size_t>(t[2])];
    return mesh.triangle_area(e) / 6.0 * (a * a + b * b + c * c + a * b + b * c + c * a);
  });
  return std::sqrt(std::max(sq, 0.0));
}

double error_h1semi(const FemFunction& uh, const VectorField& grad_truth, const QuadRule& quad, Exec exec) {
  require_degree(quad);
  const P1Space space(uh.mesh_ptr());
  const double sq = sum_elements(exec, space.num_elements(), [&](std::size_t e) {
    const Point2 g = p1_gradient(space, uh, e);
    double s = 0.0;
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Point2 d = g - grad_truth(space.map_point(e, quad.points[q]));
      s += quad.weights[q] * dot(d, d);
    }
    return space.area(e) * s;
  });
  return std::sqrt(sq);
}

double error_h1semi(const FemFunction& uh, const FemFunction& truth, Exec exec) {
  const FemFunction diff = difference_on_truth_mesh(uh, truth);
  const P1Space space(diff.mesh_ptr());
  const double sq = sum_elements(exec, space.num_elements(), [&](std::size_t e) {
    const Point2 g = p1_gradient(space, diff, e);
    return space.area(e) * dot(g, g);
  });
  return std::sqrt(sq);
}

double error_linf(const FemFunction& uh, const ScalarField& truth, int lattice_degree, Exec exec) {
  if (lattice_degree < 1) throw InputError("error_linf: lattice degree must be at least 1");
  const auto lattice = barycentric_lattice(lattice_degree);
  const TriMesh& mesh = uh.mesh();
  const double on_vertices = max_elements(exec, mesh.num_vertices(), [&](std::size_t i) {
    return uh[i] - truth(mesh.vertices()[i]);
  });
  const double on_lattice = max_elements(exec, mesh.num_triangles(), [&](std::size_t e) {
    const auto p = mesh.triangle_points(e);
    double m = 0.0;
    for (const auto& l : lattice) {
      const Point2 x{l[0] * p[0].x + l[1] * p[1].x + l[2] * p[2].x,
                     l[0] * p[0].y + l[1] * p[1].y + l[2] * p[2].y};
      m = std::max(m, std::abs(uh.value_in(e, l) - truth(x)));
    }
    return m;
  });
  return std::max(on_vertices, on_lattice);
}

double error_linf(const FemFunction& uh, const FemFunction& truth, Exec exec) {
  const FemFunction diff = difference_on_truth_mesh(uh, truth);
  return kernels::max_abs(exec, diff.coeffs());
}

std::vector<double> ritz_rhs(const MeshPtr& mesh, const VectorField& grad_truth, const QuadRule& quad,
                             Exec exec) {
  const P1Space space(mesh);
  const std::size_t ne = space.num_elements();
  std::vector<double> local(3 * ne);
  kernels::for_each_index(exec, ne, [&](std::size_t e) {
    Point2 mean{};
    for (std::size_t q = 0; q < quad.size(); ++q) {
      mean = mean + quad.weights[q] * grad_truth(space.map_point(e, quad.points[q]));
    }
    for (int k = 0; k < 3; ++k) local[3 * e + k] = space.area(e) * dot(mean, space.grad_basis(e, k));
  });
  std::vector<double> g(space.num_dofs(), 0.0);
  kernels::gather_vector(exec, space.scatter(), local, g);
  return g;
}

FemFunction ritz_project(const MeshPtr& mesh, const VectorField& grad_truth, const QuadRule& quad,
                         const RitzOptions& opts) {
  require_degree(quad);
  const P1Space space(mesh);
  CsrMatrix a = assemble_stiffness(space, opts.exec);
  std::vector<double> g = ritz_rhs(mesh, grad_truth, quad, opts.exec);
  apply_dirichlet(a, g, *mesh);
  const int maxit = opts.cg_maxit > 0 ? opts.cg_maxit : static_cast<int>(10 * mesh->num_vertices());
  CgResult cg = cg_solve(a, g, opts.cg_tol, maxit, {}, opts.exec);
  return FemFunction(mesh, std::move(cg.x));
}

std::optional<double> eoc(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  const bool valid = e_coarse > 0.0 && e_fine > 0.0 && h_coarse > 0.0 && h_fine > 0.0 &&
                     h_fine < h_coarse && std::isfinite(e_coarse) && std::isfinite(e_fine);
  if (!valid) return std::nullopt;
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

std::optional<double> eoc_log_corrected(double e_coarse, double e_fine, double h_coarse, double h_fine,
                                        int log_power) {
  if (!(h_coarse < 1.0)) return std::nullopt;
  const double lc = std::pow(std::abs(std::log(h_coarse)), log_power);
  const double lf = std::pow(std::abs(std::log(h_fine)), log_power);
  return eoc(e_coarse / lc, e_fine / lf, h_coarse, h_fine);
}

}  // namespace monofem
