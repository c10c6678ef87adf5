#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "monofem/fem_function.hpp"
#include "monofem/mesh.hpp"
#include "monofem/nonlinearity.hpp"
#include "monofem/norms.hpp"
#include "monofem/solver.hpp"

namespace monofem {

struct StudyProblem {
  Polygon domain;
  std::string domain_name;
  Nonlinearity d;
  ScalarField f;
  /// When present, errors are measured against it; otherwise against a
  /// fine-grid solve.
  std::optional<ExactSolution> exact;
};

/// Unit square, u = sin(pi x) sin(pi y), f = 2 pi^2 u + d(x, u) pointwise.
StudyProblem manufactured_sine_problem(Nonlinearity d);

/// Pentagon preset, d = 50 sgn(u+1)|u+1|^(1/3), f = 1.
StudyProblem benchmark_problem();

struct StudyOptions {
  int level_min = 2;
  int level_max = 5;
  /// Reference for problems without an exact solution: the solve on
  /// level_max + extra_refinements.
  int extra_refinements = 2;
  /// Start each level from the prolongated previous solution.
  bool warm_start = true;
  SolverConfig solver;
};

struct LevelRecord {
  int level = 0;
  double h = 0.0;
  std::size_t ndof = 0;
  double err_l2 = 0.0;
  double err_h1 = 0.0;
  double err_linf = 0.0;
  std::optional<double> eoc_l2, eoc_h1, eoc_linf;
  std::optional<double> eoc_l2_logcorr;    // |ln h|^2
  std::optional<double> eoc_linf_logcorr;  // |ln h|^1
  int newton_iterations = 0;
  double final_residual = 0.0;
  double wall_time_s = 0.0;
  double uh_linf = 0.0;
  /// ||u_h|| <= 2 ||u_ref|| + 1e-10; only evaluated against a discrete reference.
  std::optional<bool> uniform_bound_ok;
};

struct StudyReport {
  std::string domain;
  std::string nonlinearity;
  std::string reference;  // "exact" or "fine+<k>"
  std::vector<LevelRecord> records;
  std::optional<int> reference_level;
  std::optional<double> reference_linf;
  std::optional<SolveStats> reference_stats;
};

/// A level failed to converge; carries the records of all completed levels.
class StudyFailure : public NumericalError {
 public:
  StudyFailure(const std::string& what, StudyReport partial)
      : NumericalError(what), partial_(std::move(partial)) {}
  const StudyReport& partial() const { return partial_; }

 private:
  StudyReport partial_;
};

StudyReport run_convergence_study(const StudyProblem& problem, const StudyOptions& opts);

/// Header: level,h,ndof,err_l2,err_h1,err_linf,eoc_l2,eoc_h1,eoc_linf,eoc_l2_logcorr,newton_iters,wall_time_s
/// Reals in scientific notation with 10 significant digits; missing EOC as an
/// empty field, undefined EOC (non-positive error) as "nan".
void write_study_csv(std::ostream& out, const StudyReport& report);

}  // namespace monofem
