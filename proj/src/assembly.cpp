#include "monofem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "monofem/error.hpp"

namespace monofem {

namespace {

std::string describe_point(Point2 p) {
  std::ostringstream s;
  s.precision(17);
  s << "(" << p.x << ", " << p.y << ")";
  return s.str();
}

CsrMatrix gather_to_matrix(const P1Space& space, std::span<const double> local, Exec exec) {
  CsrMatrix m = space.zero_matrix();
  kernels::gather_matrix(exec, space.scatter(), local, m.values);
  return m;
}

std::vector<double> gather_to_vector(const P1Space& space, std::span<const double> local, Exec exec) {
  std::vector<double> out(space.num_dofs(), 0.0);
  kernels::gather_vector(exec, space.scatter(), local, out);
  return out;
}

std::size_t first_flagged(const std::vector<std::uint8_t>& flags) {
  return static_cast<std::size_t>(std::find(flags.begin(), flags.end(), 1) - flags.begin());
}

}  // namespace

// ---------------------------------------------------------------------------
// P1Space

P1Space::P1Space(MeshPtr mesh) : mesh_(std::move(mesh)) {
  const std::size_t nv = mesh_->num_vertices();
  const std::size_t ne = mesh_->num_triangles();

  area_.resize(ne);
  grad_.resize(3 * ne);
  element_rows_.resize(3 * ne);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto p = mesh_->triangle_points(e);
    const double area2 = cross(p[1] - p[0], p[2] - p[0]);
    area_[e] = 0.5 * area2;
    for (int k = 0; k < 3; ++k) {
      const Point2 a = p[(k + 1) % 3];
      const Point2 b = p[(k + 2) % 3];
      grad_[3 * e + k] = {(a.y - b.y) / area2, (b.x - a.x) / area2};
      element_rows_[3 * e + k] = mesh_->triangle(e)[k];
    }
  }

  // Vertex adjacency pattern, diagonal included.
  std::vector<std::uint64_t> pairs;
  pairs.reserve(9 * ne);
  for (const auto& tri : mesh_->triangles()) {
    for (Index i : tri) {
      for (Index j : tri) {
        pairs.push_back((static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint32_t>(j));
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  row_ptr_.assign(nv + 1, 0);
  cols_.resize(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    ++row_ptr_[(pairs[k] >> 32) + 1];
    cols_[k] = static_cast<std::int32_t>(pairs[k] & 0xffffffffu);
  }
  for (std::size_t i = 0; i < nv; ++i) row_ptr_[i + 1] += row_ptr_[i];

  slots_.resize(9 * ne);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& tri = mesh_->triangle(e);
    for (int i = 0; i < 3; ++i) {
      const auto row = static_cast<std::size_t>(tri[i]);
      const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
      const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
      for (int j = 0; j < 3; ++j) {
        const auto it = std::lower_bound(first, last, tri[j]);
        slots_[9 * e + 3 * i + j] = static_cast<std::size_t>(it - cols_.begin());
      }
    }
  }

  incidence_ptr_.assign(nv + 1, 0);
  for (const auto& tri : mesh_->triangles()) {
    for (Index i : tri) ++incidence_ptr_[static_cast<std::size_t>(i) + 1];
  }
  for (std::size_t i = 0; i < nv; ++i) incidence_ptr_[i + 1] += incidence_ptr_[i];
  incidence_.resize(3 * ne);
  std::vector<std::size_t> fill(incidence_ptr_.begin(), incidence_ptr_.end() - 1);
  for (std::size_t e = 0; e < ne; ++e) {
    for (int k = 0; k < 3; ++k) {
      const auto row = static_cast<std::size_t>(mesh_->triangle(e)[k]);
      incidence_[fill[row]++] = static_cast<std::uint32_t>(3 * e + static_cast<std::size_t>(k));
    }
  }

  scatter_ = ElementScatter{nv, ne, slots_, element_rows_, incidence_ptr_, incidence_};
}

Point2 P1Space::map_point(std::size_t e, const std::array<double, 3>& l) const {
  const auto p = mesh_->triangle_points(e);
  return {l[0] * p[0].x + l[1] * p[1].x + l[2] * p[2].x, l[0] * p[0].y + l[1] * p[1].y + l[2] * p[2].y};
}

CsrMatrix P1Space::zero_matrix() const {
  CsrMatrix m;
  m.n = num_dofs();
  m.row_ptr = row_ptr_;
  m.cols = cols_;
  m.values.assign(cols_.size(), 0.0);
  return m;
}

// ---------------------------------------------------------------------------
// Operators

CsrMatrix assemble_stiffness(const P1Space& space, Exec exec) {
  std::vector<double> local(9 * space.num_elements());
  kernels::for_each_index(exec, space.num_elements(), [&](std::size_t e) {
    const double a = space.area(e);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        local[9 * e + 3 * i + j] = a * dot(space.grad_basis(e, i), space.grad_basis(e, j));
      }
    }
  });
  return gather_to_matrix(space, local, exec);
}

CsrMatrix assemble_mass(const P1Space& space, Exec exec) {
  std::vector<double> local(9 * space.num_elements());
  kernels::for_each_index(exec, space.num_elements(), [&](std::size_t e) {
    const double a = space.area(e) / 12.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) local[9 * e + 3 * i + j] = i == j ? 2.0 * a : a;
    }
  });
  return gather_to_matrix(space, local, exec);
}

CsrMatrix assemble_mass_quadrature(const P1Space& space, const QuadRule& quad, Exec exec) {
  std::vector<double> local(9 * space.num_elements(), 0.0);
  kernels::for_each_index(exec, space.num_elements(), [&](std::size_t e) {
    const double a = space.area(e);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const auto& l = quad.points[q];
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) local[9 * e + 3 * i + j] += a * quad.weights[q] * l[i] * l[j];
      }
    }
  });
  return gather_to_matrix(space, local, exec);
}

std::vector<double> assemble_load(const P1Space& space, const ScalarField& f, const QuadRule& quad,
                                  Exec exec) {
  const std::size_t ne = space.num_elements();
  std::vector<double> local(3 * ne, 0.0);
  std::vector<std::uint8_t> bad(ne, 0);
  kernels::for_each_index(exec, ne, [&](std::size_t e) {
    const double a = space.area(e);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const auto& l = quad.points[q];
      const double fq = f(space.map_point(e, l));
      if (!std::isfinite(fq)) bad[e] = 1;
      const double s = a * quad.weights[q] * fq;
      for (int i = 0; i < 3; ++i) local[3 * e + i] += s * l[i];
    }
  });
  if (const std::size_t e = first_flagged(bad); e < ne) {
    for (const auto& l : quad.points) {
      const Point2 x = space.map_point(e, l);
      if (!std::isfinite(f(x))) {
        throw NumericalError("right-hand side is not finite at " + describe_point(x) +
                             " (element " + std::to_string(e) + ")");
      }
    }
  }
  return gather_to_vector(space, local, exec);
}

std::vector<double> assemble_nonlinear_residual(const P1Space& space, const Nonlinearity& d,
                                                std::span<const double> u, const QuadRule& quad,
                                                Exec exec) {
  const std::size_t ne = space.num_elements();
  const TriMesh& mesh = space.mesh();
  std::vector<double> local(3 * ne, 0.0);
  std::vector<std::uint8_t> bad(ne, 0);
  kernels::for_each_index(exec, ne, [&](std::size_t e) {
    const auto& tri = mesh.triangle(e);
    const double u0 = u[static_cast<std::size_t>(tri[0])];
    const double u1 = u[static_cast<std::size_t>(tri[1])];
    const double u2 = u[static_cast<std::size_t>(tri[2])];
    const double a = space.area(e);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const auto& l = quad.points[q];
      const double dq = d(space.map_point(e, l), l[0] * u0 + l[1] * u1 + l[2] * u2);
      if (!std::isfinite(dq)) bad[e] = 1;
      const double s = a * quad.weights[q] * dq;
      for (int i = 0; i < 3; ++i) local[3 * e + i] += s * l[i];
    }
  });
  if (const std::size_t e = first_flagged(bad); e < ne) {
    throw NumericalError("nonlinearity is not finite in element " + std::to_string(e) + " near " +
                         describe_point(space.map_point(e, {1.0 / 3, 1.0 / 3, 1.0 / 3})));
  }
  return gather_to_vector(space, local, exec);
}

double floored_slope(double du, double dv, double u, double v, double floor) {
  const double e = u - v;
  if (e == 0.0) return 0.0;
  const double denom = std::max(std::abs(e), floor);
  return (du - dv) / (e > 0.0 ? denom : -denom);
}

CsrMatrix assemble_slope_matrix(const P1Space& space, const Nonlinearity& d,
                                std::span<const double> u, std::span<const double> v, double floor,
                                const QuadRule& quad, Exec exec) {
  if (!(floor > 0.0)) throw InputError("slope floor must be positive");
  const std::size_t ne = space.num_elements();
  const TriMesh& mesh = space.mesh();
  std::vector<double> local(9 * ne, 0.0);
  std::vector<double> worst(ne, 0.0);
  kernels::for_each_index(exec, ne, [&](std::size_t e) {
    const auto& tri = mesh.triangle(e);
    const double a = space.area(e);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const auto& l = quad.points[q];
      double uq = 0.0, vq = 0.0;
      for (int k = 0; k < 3; ++k) {
        uq += l[k] * u[static_cast<std::size_t>(tri[k])];
        vq += l[k] * v[static_cast<std::size_t>(tri[k])];
      }
      const Point2 x = space.map_point(e, l);
      const double b = floored_slope(d(x, uq), d(x, vq), uq, vq, floor);
      if (!(b >= -1e-12)) worst[e] = std::isnan(b) ? -std::numeric_limits<double>::infinity() : std::min(worst[e], b);
      const double s = a * quad.weights[q] * b;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) local[9 * e + 3 * i + j] += s * l[i] * l[j];
      }
    }
  });
  for (std::size_t e = 0; e < ne; ++e) {
    if (worst[e] < 0.0) {
      std::ostringstream s;
      s << "slope weight " << worst[e] << " in element " << e
        << ": the nonlinearity is not monotone or not finite";
      throw NumericalError(s.str());
    }
  }
  return gather_to_matrix(space, local, exec);
}

void apply_dirichlet(CsrMatrix& matrix, std::span<double> rhs, const TriMesh& mesh) {
  const auto boundary = mesh.boundary_flags();
  for (std::size_t i = 0; i < matrix.n; ++i) {
    const bool row_fixed = boundary[i] != 0;
    for (std::size_t k = matrix.row_ptr[i]; k < matrix.row_ptr[i + 1]; ++k) {
      const auto j = static_cast<std::size_t>(matrix.cols[k]);
      if (row_fixed) {
        matrix.values[k] = i == j ? 1.0 : 0.0;
      } else if (boundary[j]) {
        matrix.values[k] = 0.0;
      }
    }
    if (row_fixed && i < rhs.size()) rhs[i] = 0.0;
  }
}

void zero_boundary_entries(std::span<double> v, const TriMesh& mesh) {
  const auto boundary = mesh.boundary_flags();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (boundary[i]) v[i] = 0.0;
  }
}

FemFunction interpolate(MeshPtr mesh, const ScalarField& g) {
  std::vector<double> c(mesh->num_vertices());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Point2 p = mesh->vertices()[i];
    c[i] = g(p);
    if (!std::isfinite(c[i])) {
      throw NumericalError("interpolated function is not finite at vertex " + std::to_string(i) +
                           " " + describe_point(p));
    }
  }
  return FemFunction(std::move(mesh), std::move(c));
}

FemFunction prolongate(const FemFunction& u, const MeshPtr& fine) {
  if (!fine || !is_descendant(*fine, u.mesh())) {
    throw InputError("prolongate: target mesh is not a refinement of the function's mesh");
  }
  std::vector<const TriMesh*> chain;
  for (const TriMesh* m = fine.get(); m != &u.mesh(); m = m->parent().get()) chain.push_back(m);
  std::vector<double> c(u.coeffs().begin(), u.coeffs().end());
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const TriMesh& m = **it;
    const std::size_t n_old = c.size();
    c.resize(m.num_vertices());
    const auto parents = m.midpoint_parents();
    for (std::size_t k = 0; k < parents.size(); ++k) {
      c[n_old + k] = 0.5 * (c[static_cast<std::size_t>(parents[k][0])] +
                            c[static_cast<std::size_t>(parents[k][1])]);
    }
  }
  return FemFunction(fine, std::move(c));
}

}  // namespace monofem
