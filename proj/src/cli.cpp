#include "monofem/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "monofem/config.hpp"
#include "monofem/error.hpp"
#include "monofem/validate.hpp"

namespace monofem {

namespace {

struct Flags {
  std::string config;
  std::string output;
  std::string domain;
  std::string mesh;
  std::string levels;
  int level = -1;
  int threads = -1;
};

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file '" + path + "'");
  return out;
}

RunConfig load_config(const Flags& flags) {
  RunConfig cfg;
  if (!flags.config.empty()) cfg = parse_run_config(read_file(flags.config));
  if (!flags.domain.empty()) cfg.domain = flags.domain;
  if (!flags.mesh.empty()) cfg.mesh_file = flags.mesh;
  if (!flags.output.empty()) cfg.output = flags.output;
  if (flags.level >= 0) cfg.level = flags.level;
  if (!flags.levels.empty()) std::tie(cfg.level_min, cfg.level_max) = parse_levels(flags.levels);
  if (flags.threads >= 0) cfg.threads = flags.threads;
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  return cfg;
}

MeshPtr build_mesh(const RunConfig& cfg) {
  if (cfg.mesh_file) {
    std::ifstream in(*cfg.mesh_file);
    if (!in) throw InputError("cannot open mesh file '" + *cfg.mesh_file + "'");
    return read_mesh(in);
  }
  return refine_uniform(triangulate_convex_polygon(resolve_domain(cfg)), cfg.level);
}

void print_stats(std::ostream& out, std::size_t ndof, const SolveStats& s) {
  out << "ndof " << ndof << '\n'
      << "newton_iterations " << s.newton_iterations << '\n'
      << "cg_iterations " << s.total_cg_iterations << '\n'
      << "damping_activations " << s.damping_activations << '\n'
      << "continuation_activations " << s.continuation_activations << '\n'
      << "final_residual " << sci(s.final_residual_norm) << '\n';
}

int cmd_mesh(const Flags& flags, std::ostream& out) {
  const RunConfig cfg = load_config(flags);
  const MeshPtr mesh = build_mesh(cfg);
  auto file = open_output(cfg.output.value_or("mesh.txt"));
  write_mesh(file, *mesh);
  out << "nv " << mesh->num_vertices() << '\n'
      << "nt " << mesh->num_triangles() << '\n'
      << "h " << sci(mesh_size(*mesh)) << '\n';
  return kExitOk;
}

int cmd_solve(const Flags& flags, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(flags);
  const StudyProblem problem = build_problem(cfg);
  const MeshPtr mesh = build_mesh(cfg);
  try {
    const SolveResult res = solve_semilinear(mesh, problem.d, problem.f, cfg.solver);
    auto file = open_output(cfg.output.value_or("solution.txt"));
    write_fem_function(file, res.solution);
    print_stats(out, mesh->num_interior_vertices(), res.stats);
    out << "uh_linf " << sci(res.solution.max_abs()) << '\n';
    if (problem.exact) out << "err_l2 " << sci(error_l2(res.solution, problem.exact->value)) << '\n';
  } catch (const SolveFailure& e) {
    err << "error: " << e.what() << '\n';
    print_stats(out, mesh->num_interior_vertices(), e.stats());
    return kExitNumerical;
  }
  return kExitOk;
}

void print_study_summary(std::ostream& out, const StudyReport& report) {
  out << "domain " << report.domain << '\n'
      << "nonlinearity " << report.nonlinearity << '\n'
      << "reference " << report.reference << '\n'
      << "levels_completed " << report.records.size() << '\n';
  if (report.reference_stats) {
    out << "reference_level " << *report.reference_level << '\n'
        << "reference_residual " << sci(report.reference_stats->final_residual_norm) << '\n';
  }
  if (!report.records.empty()) {
    const LevelRecord& last = report.records.back();
    auto show = [&](const char* name, const std::optional<double>& v) {
      out << name << ' ' << (v ? sci(*v) : std::string("-")) << '\n';
    };
    show("final_eoc_l2", last.eoc_l2);
    show("final_eoc_h1", last.eoc_h1);
    show("final_eoc_linf", last.eoc_linf);
    const bool bound_checked = std::any_of(report.records.begin(), report.records.end(),
                                           [](const LevelRecord& r) { return r.uniform_bound_ok.has_value(); });
    if (bound_checked) {
      const bool ok = std::all_of(report.records.begin(), report.records.end(),
                                  [](const LevelRecord& r) { return r.uniform_bound_ok.value_or(true); });
      out << "uniform_bound " << (ok ? "ok" : "violated") << '\n';
    }
  }
}

int cmd_study(const Flags& flags, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(flags);
  StudyProblem problem = build_problem(cfg);
  StudyOptions opts;
  opts.level_min = cfg.level_min;
  opts.level_max = cfg.level_max;
  opts.warm_start = cfg.warm_start;
  opts.solver = cfg.solver;
  if (cfg.reference) {
    const std::optional<int> k = parse_reference(*cfg.reference);
    if (!k && !problem.exact) {
      throw InputError("reference 'exact' needs rhs 'manufactured'; use fine+<k> instead");
    }
    if (k) {
      problem.exact.reset();
      opts.extra_refinements = *k;
    }
  }
  const std::string path = cfg.output.value_or("study.csv");
  auto file = open_output(path);
  try {
    const StudyReport report = run_convergence_study(problem, opts);
    write_study_csv(file, report);
    print_study_summary(out, report);
  } catch (const StudyFailure& e) {
    write_study_csv(file, e.partial());
    err << "error: " << e.what() << '\n';
    print_study_summary(out, e.partial());
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_validate(const Flags& flags, std::ostream& out) {
  load_config(flags);
  const auto results = run_validation_suite();
  int failed = 0;
  for (const auto& r : results) {
    out << (r.pass ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) out << "  " << r.detail;
    out << '\n';
    failed += r.pass ? 0 : 1;
  }
  out << results.size() - failed << '/' << results.size() << " checks passed\n";
  return failed == 0 ? kExitOk : kExitNumerical;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"P1 finite elements for -lap u + d(x,u) = f with zero Dirichlet data", "monofem"};
  app.require_subcommand(1);
  Flags flags;

  auto common = [&](CLI::App* sub, bool levels) {
    sub->add_option("--config", flags.config, "key = value configuration file");
    sub->add_option("--output", flags.output, "output file");
    sub->add_option("--domain", flags.domain, "preset (unit-square, unit-triangle, paper-pentagon) or polygon file");
    sub->add_option("--threads", flags.threads, "OpenMP threads, 0 = runtime default")->check(CLI::NonNegativeNumber);
    if (levels) {
      sub->add_option("--levels", flags.levels, "study levels <a>..<b>");
    } else {
      sub->add_option("--level", flags.level, "uniform refinement level")->check(CLI::NonNegativeNumber);
    }
  };

  CLI::App* mesh = app.add_subcommand("mesh", "write the level-L mesh of a domain");
  common(mesh, false);
  CLI::App* solve = app.add_subcommand("solve", "solve on one mesh and write the nodal values");
  common(solve, false);
  solve->add_option("--mesh", flags.mesh, "mesh file to solve on instead of domain/level");
  CLI::App* study = app.add_subcommand("study", "convergence study, written as CSV");
  common(study, true);
  CLI::App* validate = app.add_subcommand("validate", "run the built-in oracle checks");
  validate->add_option("--threads", flags.threads, "OpenMP threads, 0 = runtime default")->check(CLI::NonNegativeNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (*mesh) return cmd_mesh(flags, out);
    if (*solve) return cmd_solve(flags, out, err);
    if (*study) return cmd_study(flags, out, err);
    return cmd_validate(flags, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace monofem
