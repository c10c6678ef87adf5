#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "monofem/mesh.hpp"

namespace monofem {

/// Continuous piecewise-linear function given by its nodal values.
class FemFunction {
 public:
  /// Throws InputError if coeffs.size() != vertex count.
  FemFunction(MeshPtr mesh, std::vector<double> coeffs);

  static FemFunction zero(MeshPtr mesh);

  const TriMesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }

  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  double operator[](std::size_t i) const { return coeffs_[i]; }
  double& operator[](std::size_t i) { return coeffs_[i]; }

  /// Point evaluation through locate_point.
  double value_at(Point2 p) const;

  /// Value in triangle t at the given barycentric coordinates.
  double value_in(std::size_t t, const std::array<double, 3>& bary) const;

  double max_abs() const;

  /// True when every boundary coefficient is exactly zero (membership in V_h).
  bool satisfies_dirichlet() const;

  /// Sets boundary coefficients to zero.
  void zero_boundary();

 private:
  MeshPtr mesh_;
  std::vector<double> coeffs_;
};

/// Text format: "nv" then nv values with 17 significant digits.
void write_fem_function(std::ostream& out, const FemFunction& u);
FemFunction read_fem_function(std::istream& in, MeshPtr mesh);

}  // namespace monofem
