// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "monofem/norms.hpp"
#include "monofem/study.hpp"
#include "oracles.hpp"

using namespace monofem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

MeshPtr level(const char* name, int l) { return refine_uniform(triangulate_convex_polygon(preset_polygon(name)), l); }

double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

const ScalarField kOne = [](Point2) { return 1.0; };

Outcome element_oracles() {
  const P1Space space(TriMesh::create({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}));
  const CsrMatrix k = assemble_stiffness(space);
  const CsrMatrix m = assemble_mass(space);
  const double kw[3][3] = {{1, -0.5, -0.5}, {-0.5, 0.5, 0}, {-0.5, 0, 0.5}};
  double ek = 0.0, em = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      ek = std::max(ek, std::abs(k.at(i, j) - kw[i][j]));
      em = std::max(em, std::abs(m.at(i, j) - (i == j ? 2.0 : 1.0) / 24.0));
    }
  return {ek <= 1e-14 && em <= 1e-14, fmt("stiffness error %.1e, mass error %.1e", ek, em)};
}

Outcome quadrature_exactness() {
  double worst = 0.0;
  std::string rules;
  for (const QuadRule* r : shipped_rules()) {
    for (int a = 0; a <= r->degree; ++a)
      for (int b = 0; a + b <= r->degree; ++b) {
        double s = 0.0;
        for (std::size_t q = 0; q < r->size(); ++q)
          s += r->weights[q] * std::pow(r->points[q][1], a) * std::pow(r->points[q][2], b);
        const double exact = 2.0 * factorial(a) * factorial(b) / factorial(a + b + 2);
        worst = std::max(worst, std::abs(s - exact) / exact);
      }
    rules += fmt("%s%s(deg %d)", rules.empty() ? "" : ", ", r->name.c_str(), r->degree);
  }
  return {worst <= 1e-13, fmt("%s; max relative error %.1e", rules.c_str(), worst)};
}

Outcome manufactured_study() {
  StudyOptions opts;
  opts.level_min = 2;
  opts.level_max = 5;
  const StudyReport rep = run_convergence_study(manufactured_sine_problem(make_power_law({.exponent = 0.5})), opts);
  const LevelRecord& last = rep.records.back();
  const double l2 = last.eoc_l2.value_or(NAN), h1 = last.eoc_h1.value_or(NAN);
  const bool ok = l2 >= 1.85 && l2 <= 2.15 && h1 >= 0.9 && h1 <= 1.1;
  return {ok, fmt("final eoc_l2 %.4f in [1.85, 2.15], eoc_h1 %.4f in [0.9, 1.1]", l2, h1)};
}

StudyOptions benchmark_options() {
  StudyOptions opts;
  opts.level_min = 2;
  opts.level_max = 6;
  opts.extra_refinements = 2;
  return opts;
}

std::string csv_without_wall_time(const StudyReport& rep) {
  std::ostringstream csv;
  write_study_csv(csv, rep);
  std::istringstream in(csv.str());
  std::string out;
  for (std::string line; std::getline(in, line);) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

Outcome benchmark_rates(const StudyReport& rep) {
  const LevelRecord& last = rep.records.back();
  const double linf = last.eoc_linf.value_or(NAN), l2 = last.eoc_l2.value_or(NAN);
  const bool ok = linf >= 1.15 && linf <= 1.6 && l2 >= 1.75;
  return {ok, fmt("reference level %d; final eoc_linf %.4f in [1.15, 1.6], eoc_l2 %.4f >= 1.75",
                  rep.reference_level.value_or(-1), linf, l2)};
}

Outcome uniform_bound(const StudyReport& rep) {
  bool ok = true;
  double worst = 0.0;
  for (const LevelRecord& r : rep.records) {
    ok = ok && r.uniform_bound_ok.value_or(false);
    worst = std::max(worst, r.uh_linf / *rep.reference_linf);
  }
  return {ok, fmt("max ||u_h|| / ||u_ref|| = %.6f over %zu levels", worst, rep.records.size())};
}

Outcome uniqueness() {
  const MeshPtr mesh = level("paper-pentagon", 4);
  const SolveResult a = solve_semilinear(mesh, benchmark_nonlinearity(), kOne);
  FemFunction guess = interpolate(mesh, [](Point2 p) { return 0.1 * p.x * p.y; });
  guess.zero_boundary();
  const SolveResult b = solve_semilinear(mesh, benchmark_nonlinearity(), kOne, {}, guess);
  const double diff = max_diff(a.solution.coeffs(), b.solution.coeffs());
  return {diff <= 1e-8, fmt("max difference %.2e (residuals %.1e, %.1e)", diff, a.stats.final_residual_norm,
                            b.stats.final_residual_norm)};
}

Outcome cut_consistency() {
  const MeshPtr mesh = level("paper-pentagon", 4);
  const Nonlinearity d = benchmark_nonlinearity();
  const SolveResult a = solve_semilinear(mesh, d, kOne);
  const double M = 2.0 * a.solution.max_abs() + 1.0;
  const SolveResult b = solve_semilinear(mesh, cut(d, M), kOne);
  const double diff = max_diff(a.solution.coeffs(), b.solution.coeffs());
  return {diff <= 1e-8, fmt("M = %.4f, max difference %.2e", M, diff)};
}

Outcome ritz_rates() {
  constexpr double pi = std::numbers::pi;
  const auto u = [](Point2 p) { return std::sin(pi * p.x) * std::sin(pi * p.y); };
  const auto grad = [](Point2 p) {
    return Point2{pi * std::cos(pi * p.x) * std::sin(pi * p.y), pi * std::sin(pi * p.x) * std::cos(pi * p.y)};
  };
  std::vector<double> el2, eh1, h;
  for (int l = 3; l <= 6; ++l) {
    const MeshPtr m = level("unit-square", l);
    const FemFunction r = ritz_project(m, grad);
    el2.push_back(error_l2(r, u));
    eh1.push_back(error_h1semi(r, grad));
    h.push_back(mesh_size(*m));
  }
  bool ok = true;
  std::string rates;
  for (std::size_t k = 1; k < h.size(); ++k) {
    const double a = eoc(el2[k - 1], el2[k], h[k - 1], h[k]).value_or(NAN);
    const double b = eoc(eh1[k - 1], eh1[k], h[k - 1], h[k]).value_or(NAN);
    ok = ok && a >= 1.9 && a <= 2.1 && b >= 0.9 && b <= 1.1;
    rates += fmt(" %.3f/%.3f", a, b);
  }
  return {ok, "L2/H1 EOC per level:" + rates};
}

Outcome tiny_instance() {
  const MeshPtr mesh = level("unit-square", 2);
  const SolveResult r = solve_semilinear(mesh, linear_nonlinearity(1.0), kOne);
  const auto want = oracle::linear_reaction_solve(*mesh, 1.0, 1.0);
  const double diff = max_diff(r.solution.coeffs(), want);
  return {diff <= 1e-9, fmt("%zu dofs, max difference to dense direct solve %.2e", mesh->num_interior_vertices(), diff)};
}

int failures = 0;

void report(int id, const char* title, double limit_s, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs <= limit_s;
  const bool pass = o.pass && in_time;
  failures += pass ? 0 : 1;
  std::printf("%s criterion %2d: %s -- %s [%.2fs, limit %.0fs%s]\n", pass ? "PASS" : "FAIL", id, title,
              o.detail.c_str(), secs, limit_s, in_time ? "" : ", EXCEEDED");
  std::fflush(stdout);
}

}  // namespace

int main() {
  report(1, "element oracles", 1, element_oracles);
  report(2, "quadrature exactness", 1, quadrature_exactness);
  report(3, "manufactured Lipschitz-band study", 60, manufactured_study);

  StudyReport bench;
  report(4, "pentagon benchmark rates", 300, [&] {
    bench = run_convergence_study(benchmark_problem(), benchmark_options());
    return benchmark_rates(bench);
  });
  report(5, "uniqueness", 30, uniqueness);
  report(6, "uniform bound", 1, [&] {
    if (bench.records.empty()) return Outcome{false, "benchmark study unavailable"};
    return uniform_bound(bench);
  });
  report(7, "cut-consistency", 30, cut_consistency);
  report(8, "Ritz projection rates", 30, ritz_rates);
  report(9, "tiny-instance oracle", 5, tiny_instance);
  report(10, "determinism", 300, [&] {
    if (bench.records.empty()) return Outcome{false, "benchmark study unavailable"};
    // Rerun with a different thread count; the kernels are thread-count independent.
    const int saved = omp_get_max_threads();
    omp_set_num_threads(saved == 1 ? 3 : 1);
    const StudyReport again = run_convergence_study(benchmark_problem(), benchmark_options());
    omp_set_num_threads(saved);
    const bool same = csv_without_wall_time(bench) == csv_without_wall_time(again);
    return Outcome{same, fmt("rerun with %d thread(s): CSV %s", saved == 1 ? 3 : 1, same ? "byte-identical" : "differs")};
  });

  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
