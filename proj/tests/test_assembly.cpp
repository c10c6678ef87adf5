#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "monofem/assembly.hpp"
#include "monofem/error.hpp"
#include "monofem/kernels.hpp"
#include "oracles.hpp"

using namespace monofem;

namespace {

using oracle::Dense;

MeshPtr unit_right_triangle() { return TriMesh::create({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}); }

MeshPtr level(const char* name, int l) { return refine_uniform(triangulate_convex_polygon(preset_polygon(name)), l); }

double max_dense_diff(const CsrMatrix& a, const Dense& d) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < a.n; ++j) worst = std::max(worst, std::abs(a.at(i, j) - d[i][j]));
  return worst;
}

std::vector<double> multiply(const CsrMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.n);
  kernels::serial::spmv(a, x, y);
  return y;
}

std::vector<double> random_vector(std::size_t n, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(gen);
  return v;
}

}  // namespace

TEST_CASE("element matrices on the unit right triangle") {
  const P1Space space(unit_right_triangle());
  const CsrMatrix k = assemble_stiffness(space);
  const double want[3][3] = {{1, -0.5, -0.5}, {-0.5, 0.5, 0}, {-0.5, 0, 0.5}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(k.at(i, j) - want[i][j]) <= 1e-14);

  const CsrMatrix m = assemble_mass(space);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(m.at(i, j) - (i == j ? 2.0 : 1.0) / 24.0) <= 1e-14);
}

TEST_CASE("mass of a general triangle is A/12 [[2,1,1],[1,2,1],[1,1,2]]") {
  const MeshPtr m = TriMesh::create({{0.3, -0.2}, {2.0, 0.5}, {-0.4, 1.7}}, {{0, 1, 2}});
  const double area = m->triangle_area(0);
  for (const CsrMatrix& mass : {assemble_mass(P1Space(m)), assemble_mass_quadrature(P1Space(m), edge_midpoint_rule()),
                                assemble_mass_quadrature(P1Space(m), seven_point_rule())}) {
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) CHECK(mass.at(i, j) == doctest::Approx(area / 12 * (i == j ? 2 : 1)).epsilon(1e-14));
  }
}

TEST_CASE("global matrices against dense oracles") {
  for (const char* name : {"unit-square", "unit-triangle", "paper-pentagon"}) {
    CAPTURE(name);
    const MeshPtr mesh = level(name, 2);
    const P1Space space(mesh);
    CHECK(max_dense_diff(assemble_stiffness(space), oracle::stiffness(*mesh)) <= 1e-13);
    CHECK(max_dense_diff(assemble_mass(space), oracle::mass(*mesh)) <= 1e-15);
  }
}

TEST_CASE("matrix structure") {
  const P1Space space(level("paper-pentagon", 3));
  const CsrMatrix k = assemble_stiffness(space);
  const CsrMatrix m = assemble_mass(space);
  CHECK(k.is_symmetric(1e-14));
  CHECK(m.is_symmetric(1e-14));
  for (std::size_t i = 0; i < k.n; ++i) {
    double row = 0.0;
    for (std::size_t p = k.row_ptr[i]; p < k.row_ptr[i + 1]; ++p) {
      row += k.values[p];
      if (p + 1 < k.row_ptr[i + 1]) CHECK(k.cols[p] < k.cols[p + 1]);  // sorted, no duplicates
    }
    CHECK(std::abs(row) <= 1e-13);
  }
  // 1' M 1 is the domain area.
  const std::vector<double> ones(m.n, 1.0);
  const auto m1 = multiply(m, ones);
  CHECK(std::accumulate(m1.begin(), m1.end(), 0.0) == doctest::Approx(0.875).epsilon(1e-14));
}

TEST_CASE("assembly does not depend on element order") {
  const MeshPtr mesh = level("paper-pentagon", 2);
  std::vector<Triangle> tris(mesh->triangles().begin(), mesh->triangles().end());
  std::mt19937 gen(7);
  std::shuffle(tris.begin(), tris.end(), gen);
  for (auto& t : tris) std::rotate(t.begin(), t.begin() + 1, t.end());
  const MeshPtr shuffled = TriMesh::create({mesh->vertices().begin(), mesh->vertices().end()}, tris);
  const CsrMatrix a = assemble_stiffness(P1Space(mesh));
  const CsrMatrix b = assemble_stiffness(P1Space(shuffled));
  REQUIRE(a.cols == b.cols);
  for (std::size_t k = 0; k < a.nnz(); ++k) CHECK(std::abs(a.values[k] - b.values[k]) <= 1e-13 * std::max(1.0, std::abs(a.values[k])));
}

TEST_CASE("load vector") {
  const MeshPtr tri = TriMesh::create({{0.3, -0.2}, {2.0, 0.5}, {-0.4, 1.7}}, {{0, 1, 2}});
  const double area = tri->triangle_area(0);
  const P1Space one(tri);
  for (const QuadRule* r : shipped_rules()) {
    const auto f1 = assemble_load(one, [](Point2) { return 1.0; }, *r);
    for (double v : f1) CHECK(v == doctest::Approx(area / 3).epsilon(1e-14));
    const auto f3 = assemble_load(one, [](Point2) { return 3.0; }, *r);
    for (std::size_t i = 0; i < 3; ++i) CHECK(f3[i] == doctest::Approx(3 * f1[i]).epsilon(1e-14));
    const auto f0 = assemble_load(one, [](Point2) { return 0.0; }, *r);
    for (double v : f0) CHECK(v == 0.0);
  }

  // Affine f: F = M f_I exactly for rules of degree >= 2.
  const MeshPtr mesh = level("paper-pentagon", 2);
  const P1Space space(mesh);
  const auto f = [](Point2 p) { return 1.0 + 2.0 * p.x - p.y; };
  const auto load = assemble_load(space, f, edge_midpoint_rule());
  const auto want = multiply(assemble_mass(space), interpolate(mesh, f).coeffs());
  for (std::size_t i = 0; i < load.size(); ++i) CHECK(load[i] == doctest::Approx(want[i]).epsilon(1e-13));

  CHECK_THROWS_AS(assemble_load(space, [](Point2 p) { return p.x > 0.5 ? NAN : 1.0; }, seven_point_rule()),
                  NumericalError);
}

TEST_CASE("nonlinear residual examples") {
  const MeshPtr mesh = level("unit-square", 2);
  const P1Space space(mesh);
  const auto u = random_vector(mesh->num_vertices(), 3);
  const auto mu = multiply(assemble_mass(space), u);
  for (const QuadRule* r : {&edge_midpoint_rule(), &seven_point_rule()}) {
    const auto n = assemble_nonlinear_residual(space, linear_nonlinearity(1.0), u, *r);
    for (std::size_t i = 0; i < n.size(); ++i) CHECK(std::abs(n[i] - mu[i]) <= 1e-13 * std::max(1e-3, std::abs(mu[i])));
  }
  const auto z = assemble_nonlinear_residual(space, zero_nonlinearity(), u, seven_point_rule());
  for (double v : z) CHECK(v == 0.0);
  const Nonlinearity one([](Point2, double) { return 1.0; }, "1");
  const auto n1 = assemble_nonlinear_residual(space, one, u, seven_point_rule());
  const auto f1 = assemble_load(space, [](Point2) { return 1.0; }, seven_point_rule());
  for (std::size_t i = 0; i < n1.size(); ++i) CHECK(n1[i] == doctest::Approx(f1[i]).epsilon(1e-14));

  const Nonlinearity bad([](Point2, double u) { return u > 0.5 ? INFINITY : u; }, "bad");
  CHECK_THROWS_AS(assemble_nonlinear_residual(space, bad, u, seven_point_rule()), NumericalError);
}

TEST_CASE("floored slope") {
  CHECK(floored_slope(3.0, 1.0, 2.0, 0.0, 1e-6) == 1.0);
  CHECK(floored_slope(1.0, 3.0, 0.0, 2.0, 1e-6) == 1.0);
  CHECK(floored_slope(5.0, 5.0, 1.0, 1.0, 1e-6) == 0.0);           // e = 0
  CHECK(floored_slope(1e-3, 0.0, 1e-9, 0.0, 1e-6) == doctest::Approx(1e3));  // denominator floored
  CHECK(floored_slope(0.0, 1e-3, 0.0, 1e-9, 1e-6) == doctest::Approx(1e3));
}

TEST_CASE("slope matrix") {
  const MeshPtr mesh = level("paper-pentagon", 2);
  const P1Space space(mesh);
  const std::size_t n = mesh->num_vertices();
  const auto u = random_vector(n, 11);

  SUBCASE("d = u with separated arguments equals the mass matrix") {
    std::vector<double> v(u);
    for (double& x : v) x -= 0.25;
    const CsrMatrix b = assemble_slope_matrix(space, linear_nonlinearity(1.0), u, v, 1e-6, seven_point_rule());
    const CsrMatrix m = assemble_mass(space);
    for (std::size_t k = 0; k < b.nnz(); ++k) CHECK(std::abs(b.values[k] - m.values[k]) <= 1e-14);
  }
  SUBCASE("U = V gives zero") {
    const CsrMatrix b = assemble_slope_matrix(space, benchmark_nonlinearity(), u, u, 1e-6, seven_point_rule());
    for (double v : b.values) CHECK(v == 0.0);
  }
  SUBCASE("kink weight 50 tau^(-2/3)") {
    const double tau = 1e-6;
    const std::vector<double> a(n, -1.0 + tau), c(n, -1.0 - tau);
    const CsrMatrix b = assemble_slope_matrix(space, benchmark_nonlinearity(), a, c, tau, seven_point_rule());
    const CsrMatrix m = assemble_mass(space);
    const double w = 50.0 * std::pow(tau, -2.0 / 3.0);
    CHECK(w == doctest::Approx(5e5));
    for (std::size_t k = 0; k < b.nnz(); ++k) CHECK(b.values[k] == doctest::Approx(w * m.values[k]).epsilon(1e-9));
  }
  SUBCASE("Gershgorin bound vanishes for a constant weight") {
    const CsrMatrix b = assemble_slope_matrix(space, linear_nonlinearity(3.0), u, u, 1e-6, seven_point_rule());
    CHECK(b.min_gershgorin_bound() >= -1e-12);
  }
  SUBCASE("positive semidefinite for monotone d") {
    // A varying weight breaks diagonal dominance of a consistent mass matrix, so test x^T B x directly.
    const auto v = random_vector(n, 12);
    for (const Nonlinearity& d : {benchmark_nonlinearity(), cut(benchmark_nonlinearity(), 0.5),
                                  make_power_law({.exponent = 0.5})}) {
      const CsrMatrix b = assemble_slope_matrix(space, d, u, v, 1e-6, seven_point_rule());
      CHECK(b.is_symmetric(1e-14));
      std::vector<double> bx(n);
      for (unsigned seed = 20; seed < 40; ++seed) {
        const auto x = random_vector(n, seed);
        kernels::serial::spmv(b, x, bx);
        const double q = std::inner_product(x.begin(), x.end(), bx.begin(), 0.0);
        const double xx = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
        CHECK(q >= -1e-12 * xx);
      }
    }
  }
  SUBCASE("non-monotone d is rejected") {
    const std::vector<double> v(n, 0.0);
    std::vector<double> w(n, 1.0);
    const Nonlinearity neg([](Point2, double x) { return -x; }, "-u", false);
    CHECK_THROWS_AS(assemble_slope_matrix(space, neg, w, v, 1e-6, seven_point_rule()), NumericalError);
  }
}

TEST_CASE("Dirichlet elimination") {
  SUBCASE("all-boundary triangle") {
    const P1Space space(unit_right_triangle());
    CsrMatrix k = assemble_stiffness(space);
    std::vector<double> rhs = {1.0, 2.0, 3.0};
    apply_dirichlet(k, rhs, space.mesh());
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(rhs[i] == 0.0);
      for (std::size_t j = 0; j < 3; ++j) CHECK(k.at(i, j) == (i == j ? 1.0 : 0.0));
    }
  }
  SUBCASE("interior block untouched, system stays symmetric") {
    const MeshPtr mesh = level("unit-square", 2);
    const P1Space space(mesh);
    const CsrMatrix k0 = assemble_stiffness(space);
    CsrMatrix k = k0;
    std::vector<double> rhs(mesh->num_vertices(), 1.0);
    apply_dirichlet(k, rhs, *mesh);
    CHECK(k.is_symmetric(0.0));
    for (std::size_t i = 0; i < k.n; ++i) {
      const bool bi = mesh->is_boundary(static_cast<Index>(i));
      CHECK(rhs[i] == (bi ? 0.0 : 1.0));
      for (std::size_t p = k.row_ptr[i]; p < k.row_ptr[i + 1]; ++p) {
        const auto j = static_cast<std::size_t>(k.cols[p]);
        const bool bj = mesh->is_boundary(static_cast<Index>(j));
        if (!bi && !bj) CHECK(k.values[p] == k0.values[p]);
        else CHECK(k.values[p] == (i == j ? 1.0 : 0.0));
      }
    }
  }
}

TEST_CASE("interpolation") {
  const MeshPtr mesh = level("paper-pentagon", 2);
  const auto g = [](Point2 p) { return 0.5 - 3.0 * p.x + 2.0 * p.y; };
  const FemFunction u = interpolate(mesh, g);
  for (const Point2 p : {Point2{0.31, 0.27}, Point2{0.9, 0.8}, Point2{0.2, 0.6}}) {
    CHECK(u.value_at(p) == doctest::Approx(g(p)).epsilon(1e-13));
  }
  const FemFunction z = interpolate(mesh, [](Point2) { return 0.0; });
  CHECK(z.max_abs() == 0.0);
  CHECK_THROWS_AS(interpolate(mesh, [](Point2) { return NAN; }), NumericalError);
}

TEST_CASE("prolongation") {
  const MeshPtr coarse = level("unit-square", 1);
  const MeshPtr fine = refine_uniform(coarse);

  SUBCASE("hat function") {
    const Index v = 4;  // the centroid, interior
    std::vector<double> c(coarse->num_vertices(), 0.0);
    c[v] = 1.0;
    const FemFunction hat = prolongate(FemFunction(coarse, c), fine);
    for (std::size_t i = 0; i < fine->num_vertices(); ++i) {
      double want = 0.0;
      if (i < coarse->num_vertices()) {
        want = i == static_cast<std::size_t>(v) ? 1.0 : 0.0;
      } else {
        const auto [a, b] = fine->midpoint_parents()[i - coarse->num_vertices()];
        want = (a == v || b == v) ? 0.5 : 0.0;
      }
      CHECK(hat[i] == want);
    }
  }
  SUBCASE("values are preserved pointwise") {
    const FemFunction u = interpolate(coarse, [](Point2 p) { return std::sin(4 * p.x) * p.y; });
    const FemFunction pu = prolongate(u, refine_uniform(fine));
    for (const Point2 p : {Point2{0.13, 0.77}, Point2{0.5, 0.5}, Point2{0.91, 0.02}}) {
      CHECK(pu.value_at(p) == doctest::Approx(u.value_at(p)).epsilon(1e-14));
    }
  }
  SUBCASE("zero and identity") {
    CHECK(prolongate(FemFunction::zero(coarse), fine).max_abs() == 0.0);
    const FemFunction u = interpolate(coarse, [](Point2 p) { return p.x; });
    const FemFunction same = prolongate(u, coarse);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(same[i] == u[i]);
  }
  SUBCASE("non-nested meshes are rejected") {
    const MeshPtr other = level("unit-square", 2);
    CHECK_THROWS_AS(prolongate(FemFunction::zero(coarse), other), InputError);
    CHECK_THROWS_AS(prolongate(FemFunction::zero(fine), coarse), InputError);
  }
}

TEST_CASE("parallel assembly reproduces the serial reference bitwise") {
  const MeshPtr mesh = level("paper-pentagon", 4);
  const P1Space space(mesh);
  const auto u = random_vector(mesh->num_vertices(), 5);
  const auto v = random_vector(mesh->num_vertices(), 6);
  const Nonlinearity d = benchmark_nonlinearity();
  const auto f = [](Point2 p) { return std::cos(p.x * p.y); };
  CHECK(assemble_stiffness(space, Exec::parallel).values == assemble_stiffness(space, Exec::serial).values);
  CHECK(assemble_mass(space, Exec::parallel).values == assemble_mass(space, Exec::serial).values);
  CHECK(assemble_load(space, f, seven_point_rule(), Exec::parallel) ==
        assemble_load(space, f, seven_point_rule(), Exec::serial));
  CHECK(assemble_nonlinear_residual(space, d, u, seven_point_rule(), Exec::parallel) ==
        assemble_nonlinear_residual(space, d, u, seven_point_rule(), Exec::serial));
  CHECK(assemble_slope_matrix(space, d, u, v, 1e-6, seven_point_rule(), Exec::parallel).values ==
        assemble_slope_matrix(space, d, u, v, 1e-6, seven_point_rule(), Exec::serial).values);
}
