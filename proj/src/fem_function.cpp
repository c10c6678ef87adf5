#include "monofem/fem_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "monofem/error.hpp"

namespace monofem {

FemFunction::FemFunction(MeshPtr mesh, std::vector<double> coeffs)
    : mesh_(std::move(mesh)), coeffs_(std::move(coeffs)) {
  if (!mesh_) throw InputError("FemFunction requires a mesh");
  if (coeffs_.size() != mesh_->num_vertices()) {
    throw InputError("FemFunction has " + std::to_string(coeffs_.size()) +
                     " coefficients for a mesh with " + std::to_string(mesh_->num_vertices()) +
                     " vertices");
  }
}

FemFunction FemFunction::zero(MeshPtr mesh) {
  const std::size_t n = mesh->num_vertices();
  return FemFunction(std::move(mesh), std::vector<double>(n, 0.0));
}

double FemFunction::value_in(std::size_t t, const std::array<double, 3>& bary) const {
  const auto& tri = mesh_->triangle(t);
  return bary[0] * coeffs_[static_cast<std::size_t>(tri[0])] +
         bary[1] * coeffs_[static_cast<std::size_t>(tri[1])] +
         bary[2] * coeffs_[static_cast<std::size_t>(tri[2])];
}

double FemFunction::value_at(Point2 p) const {
  const auto loc = locate_point(*mesh_, p);
  return value_in(loc.triangle, loc.bary);
}

double FemFunction::max_abs() const {
  double m = 0.0;
  for (double v : coeffs_) m = std::max(m, std::abs(v));
  return m;
}

bool FemFunction::satisfies_dirichlet() const {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (mesh_->boundary_flags()[i] && coeffs_[i] != 0.0) return false;
  }
  return true;
}

void FemFunction::zero_boundary() {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (mesh_->boundary_flags()[i]) coeffs_[i] = 0.0;
  }
}

void write_fem_function(std::ostream& out, const FemFunction& u) {
  out << u.size() << '\n';
  char buf[32];
  for (double v : u.coeffs()) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << '\n';
  }
}

FemFunction read_fem_function(std::istream& in, MeshPtr mesh) {
  long long n = -1;
  if (!(in >> n) || n < 0) throw InputError("function file: expected vertex count");
  std::vector<double> values(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(in >> values[i])) {
      throw InputError("function file: missing or malformed value " + std::to_string(i));
    }
  }
  return FemFunction(std::move(mesh), std::move(values));
}

}  // namespace monofem
