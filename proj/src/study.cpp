#include "monofem/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "monofem/assembly.hpp"

namespace monofem {

StudyProblem manufactured_sine_problem(Nonlinearity d) {
  constexpr double pi = std::numbers::pi;
  auto u = [](Point2 p) { return std::sin(pi * p.x) * std::sin(pi * p.y); };
  auto grad = [](Point2 p) {
    return Point2{pi * std::cos(pi * p.x) * std::sin(pi * p.y), pi * std::sin(pi * p.x) * std::cos(pi * p.y)};
  };
  StudyProblem prob{preset_polygon("unit-square"), "unit-square", d, {}, ExactSolution{u, grad}};
  prob.f = [u, d](Point2 p) {
    const double v = u(p);
    return 2.0 * pi * pi * v + d(p, v);
  };
  return prob;
}

StudyProblem benchmark_problem() {
  return {preset_polygon("paper-pentagon"), "paper-pentagon", benchmark_nonlinearity(),
          [](Point2) { return 1.0; }, std::nullopt};
}

namespace {

void fill_eoc(LevelRecord& fine, const LevelRecord& coarse) {
  fine.eoc_l2 = eoc(coarse.err_l2, fine.err_l2, coarse.h, fine.h);
  fine.eoc_h1 = eoc(coarse.err_h1, fine.err_h1, coarse.h, fine.h);
  fine.eoc_linf = eoc(coarse.err_linf, fine.err_linf, coarse.h, fine.h);
  fine.eoc_l2_logcorr = eoc_log_corrected(coarse.err_l2, fine.err_l2, coarse.h, fine.h, 2);
  fine.eoc_linf_logcorr = eoc_log_corrected(coarse.err_linf, fine.err_linf, coarse.h, fine.h, 1);
}

}  // namespace

StudyReport run_convergence_study(const StudyProblem& problem, const StudyOptions& opts) {
  if (opts.level_min < 0 || opts.level_max < opts.level_min) {
    throw InputError("study levels must satisfy 0 <= min <= max");
  }
  if (!problem.exact && opts.extra_refinements < 1) {
    throw InputError("a fine-grid reference needs at least one extra refinement");
  }
  opts.solver.validate();

  StudyReport report;
  report.domain = problem.domain_name;
  report.nonlinearity = problem.d.description();
  report.reference = problem.exact ? "exact" : "fine+" + std::to_string(opts.extra_refinements);

  using Clock = std::chrono::steady_clock;
  MeshPtr mesh = refine_uniform(triangulate_convex_polygon(problem.domain), opts.level_min);
  std::vector<FemFunction> solutions;

  auto solve_level = [&](const MeshPtr& m, const std::optional<FemFunction>& init, int level) {
    try {
      return solve_semilinear(m, problem.d, problem.f, opts.solver, init);
    } catch (const NumericalError& e) {
      throw StudyFailure("level " + std::to_string(level) + ": " + e.what(), report);
    }
  };

  for (int level = opts.level_min; level <= opts.level_max; ++level) {
    if (level > opts.level_min) mesh = refine_uniform(mesh);
    std::optional<FemFunction> init;
    if (opts.warm_start && !solutions.empty()) init = prolongate(solutions.back(), mesh);
    const auto t0 = Clock::now();
    SolveResult res = solve_level(mesh, init, level);

    LevelRecord rec;
    rec.level = level;
    rec.h = mesh_size(*mesh);
    rec.ndof = mesh->num_interior_vertices();
    rec.newton_iterations = res.stats.newton_iterations;
    rec.final_residual = res.stats.final_residual_norm;
    rec.uh_linf = res.solution.max_abs();
    if (problem.exact) {
      const Exec ex = opts.solver.exec;
      rec.err_l2 = error_l2(res.solution, problem.exact->value, seven_point_rule(), ex);
      rec.err_h1 = error_h1semi(res.solution, problem.exact->gradient, seven_point_rule(), ex);
      rec.err_linf = error_linf(res.solution, problem.exact->value, 4, ex);
      if (!report.records.empty()) fill_eoc(rec, report.records.back());
    }
    rec.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
    report.records.push_back(rec);
    solutions.push_back(std::move(res.solution));
  }

  if (!problem.exact) {
    const int ref_level = opts.level_max + opts.extra_refinements;
    MeshPtr ref_mesh = refine_uniform(mesh, opts.extra_refinements);
    std::optional<FemFunction> init;
    if (opts.warm_start) init = prolongate(solutions.back(), ref_mesh);
    SolveResult ref = solve_level(ref_mesh, init, ref_level);
    report.reference_level = ref_level;
    report.reference_linf = ref.solution.max_abs();
    report.reference_stats = ref.stats;

    const Exec ex = opts.solver.exec;
    for (std::size_t k = 0; k < solutions.size(); ++k) {
      LevelRecord& rec = report.records[k];
      const auto t0 = Clock::now();
      rec.err_l2 = error_l2(solutions[k], ref.solution, ex);
      rec.err_h1 = error_h1semi(solutions[k], ref.solution, ex);
      rec.err_linf = error_linf(solutions[k], ref.solution, ex);
      rec.uniform_bound_ok = verify_uniform_bound(solutions[k], ref.solution).pass;
      rec.wall_time_s += std::chrono::duration<double>(Clock::now() - t0).count();
      if (k > 0) fill_eoc(rec, report.records[k - 1]);
    }
  }
  return report;
}

namespace {

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

std::string eoc_field(const std::optional<double>& value, bool first) {
  if (first) return "";
  return value ? sci(*value) : "nan";
}

}  // namespace

void write_study_csv(std::ostream& out, const StudyReport& report) {
  out << "level,h,ndof,err_l2,err_h1,err_linf,eoc_l2,eoc_h1,eoc_linf,eoc_l2_logcorr,newton_iters,"
         "wall_time_s\n";
  for (std::size_t k = 0; k < report.records.size(); ++k) {
    const LevelRecord& r = report.records[k];
    const bool first = k == 0;
    out << r.level << ',' << sci(r.h) << ',' << r.ndof << ',' << sci(r.err_l2) << ',' << sci(r.err_h1)
        << ',' << sci(r.err_linf) << ',' << eoc_field(r.eoc_l2, first) << ','
        << eoc_field(r.eoc_h1, first) << ',' << eoc_field(r.eoc_linf, first) << ','
        << eoc_field(r.eoc_l2_logcorr, first) << ',' << r.newton_iterations << ','
        << sci(r.wall_time_s) << '\n';
  }
}

}  // namespace monofem
