#pragma once

#include <array>
#include <span>
#include <vector>

#include "monofem/fem_function.hpp"
#include "monofem/kernels.hpp"
#include "monofem/mesh.hpp"
#include "monofem/nonlinearity.hpp"
#include "monofem/quadrature.hpp"
#include "monofem/sparse.hpp"

namespace monofem {

/// P1 space on a mesh: per-element geometry, the shared CSR pattern of all
/// assembled operators and the element/row maps used by the gather kernels.
class P1Space {
 public:
  explicit P1Space(MeshPtr mesh);

  const TriMesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  std::size_t num_dofs() const { return mesh_->num_vertices(); }
  std::size_t num_elements() const { return mesh_->num_triangles(); }

  double area(std::size_t e) const { return area_[e]; }
  /// Constant gradient of the barycentric coordinate of local vertex k on e.
  Point2 grad_basis(std::size_t e, int k) const { return grad_[3 * e + static_cast<std::size_t>(k)]; }
  /// Physical point of barycentric coordinates l in element e.
  Point2 map_point(std::size_t e, const std::array<double, 3>& l) const;

  /// All-zero matrix with the vertex-adjacency pattern.
  CsrMatrix zero_matrix() const;
  const ElementScatter& scatter() const { return scatter_; }

 private:
  MeshPtr mesh_;
  std::vector<double> area_;
  std::vector<Point2> grad_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::int32_t> cols_;
  std::vector<std::size_t> slots_;
  std::vector<std::int32_t> element_rows_;
  std::vector<std::size_t> incidence_ptr_;
  std::vector<std::uint32_t> incidence_;
  ElementScatter scatter_;
};

/// Unconstrained stiffness matrix (grad phi_j, grad phi_i); exact.
CsrMatrix assemble_stiffness(const P1Space& space, Exec exec = Exec::parallel);

/// Consistent mass matrix, closed form A/12 [[2,1,1],[1,2,1],[1,1,2]] per element.
CsrMatrix assemble_mass(const P1Space& space, Exec exec = Exec::parallel);

/// Mass matrix integrated with a quadrature rule instead of the closed form.
CsrMatrix assemble_mass_quadrature(const P1Space& space, const QuadRule& quad,
                                   Exec exec = Exec::parallel);

/// (f, phi_i) by per-element quadrature. NumericalError naming the point if
/// f is not finite there.
std::vector<double> assemble_load(const P1Space& space, const ScalarField& f, const QuadRule& quad,
                                  Exec exec = Exec::parallel);

/// (d(., u_h), phi_i) with u_h interpolated at the quadrature points.
std::vector<double> assemble_nonlinear_residual(const P1Space& space, const Nonlinearity& d,
                                                std::span<const double> u, const QuadRule& quad,
                                                Exec exec = Exec::parallel);

/// Slope coefficient b = (d(x,u) - d(x,v)) / (sgn(u-v) max(|u-v|, floor)),
/// zero where u = v.
double floored_slope(double du, double dv, double u, double v, double floor);

/// Weighted mass matrix (b phi_j, phi_i) with b the floored difference quotient
/// between u and v at each quadrature point. Throws NumericalError if a weight
/// is below -1e-12 (d not monotone).
CsrMatrix assemble_slope_matrix(const P1Space& space, const Nonlinearity& d,
                                std::span<const double> u, std::span<const double> v, double floor,
                                const QuadRule& quad, Exec exec = Exec::parallel);

/// Symmetric elimination of the boundary rows/columns: zero row and column,
/// unit diagonal, zero right-hand side. Modifies in place.
void apply_dirichlet(CsrMatrix& matrix, std::span<double> rhs, const TriMesh& mesh);

/// Zeroes boundary entries of a vector.
void zero_boundary_entries(std::span<double> v, const TriMesh& mesh);

/// Nodal interpolant; no boundary zeroing. NumericalError on non-finite values.
FemFunction interpolate(MeshPtr mesh, const ScalarField& g);

/// Exact embedding into a nested refinement. InputError if `fine` is not a
/// refinement descendant of u's mesh.
FemFunction prolongate(const FemFunction& u, const MeshPtr& fine);

}  // namespace monofem
