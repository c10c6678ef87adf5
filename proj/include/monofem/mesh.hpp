#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "monofem/geometry.hpp"

namespace monofem {

using Index = std::int32_t;
using Triangle = std::array<Index, 3>;

/// Absolute tolerance used by all geometric predicates.
inline constexpr double kGeomTol = 1e-12;

/// Convex polygon, vertices listed counter-clockwise.
struct Polygon {
  std::vector<Point2> vertices;
};

/// Throws InputError naming the first offending vertex unless the polygon is
/// strictly convex, counter-clockwise and free of repeated vertices.
void validate_polygon(const Polygon& poly);

double polygon_area(const Polygon& poly);

/// Area centroid.
Point2 polygon_centroid(const Polygon& poly);

/// Interior angle at vertex i, in radians.
double polygon_interior_angle(const Polygon& poly, std::size_t i);

/// Built-in domains: "unit-square", "unit-triangle", "paper-pentagon".
/// The pentagon is the unit square with the corner at (0,1) cut off, giving two
/// interior angles of 3*pi/4.
Polygon preset_polygon(std::string_view name);
bool is_preset_polygon(std::string_view name);

class TriMesh;
using MeshPtr = std::shared_ptr<const TriMesh>;

/// Conforming triangulation. Immutable once built; meshes produced by
/// refine_uniform keep a link to their parent and the parent's vertices occupy
/// the leading indices. Child triangles of parent triangle t are 4t..4t+3.
class TriMesh {
 public:
  /// Validates orientation, positive areas and conformity; derives boundary
  /// flags from edge incidence. Throws InputError on failure.
  static MeshPtr create(std::vector<Point2> vertices, std::vector<Triangle> triangles);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }

  std::span<const Point2> vertices() const { return vertices_; }
  std::span<const Triangle> triangles() const { return triangles_; }
  const Point2& vertex(Index i) const { return vertices_[static_cast<std::size_t>(i)]; }
  const Triangle& triangle(std::size_t t) const { return triangles_[t]; }
  bool is_boundary(Index i) const { return boundary_[static_cast<std::size_t>(i)] != 0; }
  std::span<const std::uint8_t> boundary_flags() const { return boundary_; }
  std::size_t num_interior_vertices() const;

  int level() const { return level_; }
  const MeshPtr& parent() const { return parent_; }

  /// For vertex i >= parent()->num_vertices(): the two parent vertices whose
  /// edge midpoint it is. Empty for level-0 meshes.
  std::span<const std::array<Index, 2>> midpoint_parents() const { return midpoint_parents_; }

  double triangle_area(std::size_t t) const;
  std::array<Point2, 3> triangle_points(std::size_t t) const;

 private:
  friend MeshPtr refine_uniform(const MeshPtr& mesh);

  TriMesh() = default;

  std::vector<Point2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<std::uint8_t> boundary_;
  int level_ = 0;
  MeshPtr parent_;
  std::vector<std::array<Index, 2>> midpoint_parents_;
};

/// Centroid fan: the polygon vertices followed by the centroid; level 0.
MeshPtr triangulate_convex_polygon(const Polygon& poly);

/// Red refinement: every triangle split into four similar children through
/// its edge midpoints.
MeshPtr refine_uniform(const MeshPtr& mesh);

/// Applies refine_uniform `times` times.
MeshPtr refine_uniform(MeshPtr mesh, int times);

/// Longest edge over all triangles.
double mesh_size(const TriMesh& mesh);

/// Smallest interior angle over all triangles, radians.
double min_angle(const TriMesh& mesh);

double total_area(const TriMesh& mesh);

/// Returns a diagnostic if edge incidence counts are not all in {1,2}, an
/// interior edge is not traversed once in each direction, or the boundary
/// flags disagree with edge incidence.
std::optional<std::string> check_conformity(const TriMesh& mesh);

/// True if `fine` is `coarse` or reachable from it through parent links.
bool is_descendant(const TriMesh& fine, const TriMesh& coarse);

struct PointLocation {
  std::size_t triangle = 0;
  std::array<double, 3> bary{};
};

/// Barycentric coordinates of p with respect to triangle t.
std::array<double, 3> barycentric(const TriMesh& mesh, std::size_t t, Point2 p);

/// Finds a triangle whose closure contains p (barycentric tolerance kGeomTol).
/// Descends through the refinement hierarchy when available. Throws InputError
/// if p lies outside the domain.
PointLocation locate_point(const TriMesh& mesh, Point2 p);

/// Line-oriented text format: "nv nt", nv lines "x y b", nt lines "i j k".
void write_mesh(std::ostream& out, const TriMesh& mesh);
MeshPtr read_mesh(std::istream& in);

/// Polygon file: one "x y" pair per line, '#' starts a comment.
Polygon read_polygon(std::istream& in);

}  // namespace monofem
