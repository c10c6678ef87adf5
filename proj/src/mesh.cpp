#include "monofem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "monofem/error.hpp"

namespace monofem {

namespace {

std::uint64_t edge_key(Index a, Index b) {
  auto lo = static_cast<std::uint64_t>(std::min(a, b));
  auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

struct DirectedEdge {
  std::uint64_t key;
  bool forward;  // a < b in traversal order
};

std::vector<DirectedEdge> directed_edges(std::span<const Triangle> triangles) {
  std::vector<DirectedEdge> edges;
  edges.reserve(3 * triangles.size());
  for (const auto& t : triangles) {
    for (int k = 0; k < 3; ++k) {
      Index a = t[k];
      Index b = t[(k + 1) % 3];
      edges.push_back({edge_key(a, b), a < b});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const DirectedEdge& l, const DirectedEdge& r) {
    return l.key != r.key ? l.key < r.key : l.forward < r.forward;
  });
  return edges;
}

// Boundary flags from edges with a single incident triangle; returns a
// diagnostic if incidence is not conforming.
std::optional<std::string> derive_boundary(std::size_t nv, std::span<const Triangle> triangles,
                                           std::vector<std::uint8_t>& boundary) {
  boundary.assign(nv, 0);
  // Boundary edges per vertex; a hanging node shows up as a vertex with more than two.
  std::vector<std::uint32_t> degree(nv, 0);
  auto edges = directed_edges(triangles);
  std::size_t i = 0;
  while (i < edges.size()) {
    std::size_t j = i;
    while (j < edges.size() && edges[j].key == edges[i].key) ++j;
    const std::size_t count = j - i;
    const auto a = static_cast<Index>(edges[i].key >> 32);
    const auto b = static_cast<Index>(edges[i].key & 0xffffffffu);
    if (count == 1) {
      boundary[static_cast<std::size_t>(a)] = 1;
      boundary[static_cast<std::size_t>(b)] = 1;
      ++degree[static_cast<std::size_t>(a)];
      ++degree[static_cast<std::size_t>(b)];
    } else if (count == 2) {
      if (edges[i].forward == edges[i + 1].forward) {
        std::ostringstream msg;
        msg << "edge (" << a << "," << b << ") is traversed twice in the same direction";
        return msg.str();
      }
    } else {
      std::ostringstream msg;
      msg << "edge (" << a << "," << b << ") is shared by " << count << " triangles";
      return msg.str();
    }
    i = j;
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (degree[v] != 0 && degree[v] != 2) {
      return "vertex " + std::to_string(v) + " lies on " + std::to_string(degree[v]) +
             " boundary edges (hanging node or pinched boundary)";
    }
  }
  return std::nullopt;
}

double signed_area(Point2 a, Point2 b, Point2 c) { return 0.5 * cross(b - a, c - a); }

}  // namespace

// ---------------------------------------------------------------------------
// Polygon

void validate_polygon(const Polygon& poly) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  if (n < 3) {
    throw InputError("polygon needs at least 3 vertices, got " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(v[i].x) || !std::isfinite(v[i].y)) {
      throw InputError("polygon vertex " + std::to_string(i) + " has a non-finite coordinate");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (norm(v[i] - v[j]) <= kGeomTol) {
        throw InputError("polygon vertices " + std::to_string(i) + " and " + std::to_string(j) +
                         " coincide");
      }
    }
  }
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 prev = v[(i + n - 1) % n];
    const Point2 next = v[(i + 1) % n];
    const Point2 in = v[i] - prev;
    const Point2 out = next - v[i];
    const double c = cross(in, out);
    if (c <= kGeomTol) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "polygon vertex " << i << " (" << v[i].x << ", " << v[i].y << ") "
          << (std::abs(c) <= kGeomTol ? "is collinear with its neighbours"
                                      : "is a reflex or clockwise corner");
      throw InputError(msg.str());
    }
    turning += std::atan2(c, dot(in, out));
  }
  if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-9) {
    throw InputError("polygon boundary winds more than once (self-intersecting)");
  }
}

double polygon_area(const Polygon& poly) {
  const auto& v = poly.vertices;
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * a;
}

Point2 polygon_centroid(const Polygon& poly) {
  const auto& v = poly.vertices;
  double a = 0.0;
  Point2 c{};
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 p = v[i];
    const Point2 q = v[(i + 1) % v.size()];
    const double w = cross(p, q);
    a += w;
    c = c + w * (p + q);
  }
  return (1.0 / (3.0 * a)) * c;
}

double polygon_interior_angle(const Polygon& poly, std::size_t i) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  const Point2 to_prev = v[(i + n - 1) % n] - v[i];
  const Point2 to_next = v[(i + 1) % n] - v[i];
  return std::acos(std::clamp(dot(to_prev, to_next) / (norm(to_prev) * norm(to_next)), -1.0, 1.0));
}

bool is_preset_polygon(std::string_view name) {
  return name == "unit-square" || name == "unit-triangle" || name == "paper-pentagon";
}

Polygon preset_polygon(std::string_view name) {
  if (name == "unit-square") return {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  if (name == "unit-triangle") return {{{0, 0}, {1, 0}, {0, 1}}};
  if (name == "paper-pentagon") return {{{0, 0}, {1, 0}, {1, 1}, {0.5, 1}, {0, 0.5}}};
  throw InputError("unknown domain preset '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// TriMesh

MeshPtr TriMesh::create(std::vector<Point2> vertices, std::vector<Triangle> triangles) {
  const auto nv = vertices.size();
  if (nv > static_cast<std::size_t>(std::numeric_limits<Index>::max())) {
    throw InputError("too many vertices");
  }
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    for (Index i : tri) {
      if (i < 0 || static_cast<std::size_t>(i) >= nv) {
        throw InputError("triangle " + std::to_string(t) + " references vertex " +
                         std::to_string(i) + " out of range");
      }
    }
    const double a = signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
    if (!(a > kGeomTol * kGeomTol)) {
      throw InputError("triangle " + std::to_string(t) +
                       " has non-positive signed area (degenerate or clockwise)");
    }
  }
  std::shared_ptr<TriMesh> mesh(new TriMesh());
  mesh->vertices_ = std::move(vertices);
  mesh->triangles_ = std::move(triangles);
  if (auto err = derive_boundary(nv, mesh->triangles_, mesh->boundary_)) {
    throw InputError("non-conforming mesh: " + *err);
  }
  std::vector<std::uint8_t> used(nv, 0);
  for (const auto& tri : mesh->triangles_) {
    for (Index i : tri) used[static_cast<std::size_t>(i)] = 1;
  }
  if (auto it = std::find(used.begin(), used.end(), 0); it != used.end()) {
    throw InputError("vertex " + std::to_string(it - used.begin()) + " belongs to no triangle");
  }
  return mesh;
}

std::size_t TriMesh::num_interior_vertices() const {
  return static_cast<std::size_t>(std::count(boundary_.begin(), boundary_.end(), 0));
}

double TriMesh::triangle_area(std::size_t t) const {
  const auto& tri = triangles_[t];
  return signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

std::array<Point2, 3> TriMesh::triangle_points(std::size_t t) const {
  const auto& tri = triangles_[t];
  return {vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]};
}

MeshPtr triangulate_convex_polygon(const Polygon& poly) {
  validate_polygon(poly);
  std::vector<Point2> vertices = poly.vertices;
  const auto n = static_cast<Index>(vertices.size());
  vertices.push_back(polygon_centroid(poly));
  std::vector<Triangle> triangles;
  triangles.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) triangles.push_back({i, (i + 1) % n, n});
  return TriMesh::create(std::move(vertices), std::move(triangles));
}

MeshPtr refine_uniform(const MeshPtr& mesh) {
  const TriMesh& coarse = *mesh;
  std::shared_ptr<TriMesh> fine(new TriMesh());
  fine->vertices_.assign(coarse.vertices_.begin(), coarse.vertices_.end());
  fine->vertices_.reserve(coarse.num_vertices() + 2 * coarse.num_triangles());
  fine->boundary_.assign(coarse.boundary_.begin(), coarse.boundary_.end());

  std::unordered_map<std::uint64_t, Index> midpoint;
  midpoint.reserve(2 * coarse.num_triangles());
  auto midpoint_of = [&](Index a, Index b) {
    auto [it, inserted] = midpoint.try_emplace(edge_key(a, b), 0);
    if (inserted) {
      it->second = static_cast<Index>(fine->vertices_.size());
      const Point2 pa = coarse.vertex(a);
      const Point2 pb = coarse.vertex(b);
      fine->vertices_.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
      fine->midpoint_parents_.push_back({std::min(a, b), std::max(a, b)});
    }
    return it->second;
  };

  fine->triangles_.reserve(4 * coarse.num_triangles());
  for (const auto& tri : coarse.triangles_) {
    const Index a = tri[0], b = tri[1], c = tri[2];
    const Index ab = midpoint_of(a, b);
    const Index bc = midpoint_of(b, c);
    const Index ca = midpoint_of(c, a);
    fine->triangles_.push_back({a, ab, ca});
    fine->triangles_.push_back({ab, b, bc});
    fine->triangles_.push_back({ca, bc, c});
    fine->triangles_.push_back({ab, bc, ca});
  }
  if (auto err = derive_boundary(fine->vertices_.size(), fine->triangles_, fine->boundary_)) {
    throw NumericalError("refinement produced a non-conforming mesh: " + *err);
  }
  fine->level_ = coarse.level_ + 1;
  fine->parent_ = mesh;
  return fine;
}

MeshPtr refine_uniform(MeshPtr mesh, int times) {
  for (int i = 0; i < times; ++i) mesh = refine_uniform(mesh);
  return mesh;
}

double mesh_size(const TriMesh& mesh) {
  double h = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto p = mesh.triangle_points(t);
    for (int k = 0; k < 3; ++k) h = std::max(h, norm(p[(k + 1) % 3] - p[k]));
  }
  return h;
}

double min_angle(const TriMesh& mesh) {
  double m = std::numbers::pi;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto p = mesh.triangle_points(t);
    for (int k = 0; k < 3; ++k) {
      const Point2 u = p[(k + 1) % 3] - p[k];
      const Point2 v = p[(k + 2) % 3] - p[k];
      m = std::min(m, std::atan2(cross(u, v), dot(u, v)));
    }
  }
  return m;
}

double total_area(const TriMesh& mesh) {
  double a = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) a += mesh.triangle_area(t);
  return a;
}

std::optional<std::string> check_conformity(const TriMesh& mesh) {
  std::vector<std::uint8_t> boundary;
  if (auto err = derive_boundary(mesh.num_vertices(), mesh.triangles(), boundary)) return err;
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    if (boundary[i] != mesh.boundary_flags()[i]) {
      return "boundary flag of vertex " + std::to_string(i) + " disagrees with edge incidence";
    }
  }
  return std::nullopt;
}

bool is_descendant(const TriMesh& fine, const TriMesh& coarse) {
  for (const TriMesh* m = &fine; m != nullptr; m = m->parent().get()) {
    if (m == &coarse) return true;
  }
  return false;
}

std::array<double, 3> barycentric(const TriMesh& mesh, std::size_t t, Point2 p) {
  const auto [a, b, c] = mesh.triangle_points(t);
  const double area2 = cross(b - a, c - a);
  const double la = cross(b - p, c - p) / area2;
  const double lb = cross(c - p, a - p) / area2;
  return {la, lb, 1.0 - la - lb};
}

namespace {

double min_coord(const std::array<double, 3>& l) { return std::min({l[0], l[1], l[2]}); }

}  // namespace

PointLocation locate_point(const TriMesh& mesh, Point2 p) {
  PointLocation best{};
  double best_min = -std::numeric_limits<double>::infinity();
  auto consider = [&](std::size_t t) {
    const auto l = barycentric(mesh, t, p);
    const double m = min_coord(l);
    if (m > best_min) {
      best_min = m;
      best = {t, l};
    }
  };
  if (mesh.parent()) {
    const PointLocation coarse = locate_point(*mesh.parent(), p);
    for (std::size_t k = 0; k < 4; ++k) consider(4 * coarse.triangle + k);
  } else {
    for (std::size_t t = 0; t < mesh.num_triangles() && best_min < 0.0; ++t) consider(t);
  }
  if (best_min < -kGeomTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "point (" << p.x << ", " << p.y << ") lies outside the mesh";
    throw InputError(msg.str());
  }
  return best;
}

}  // namespace monofem
