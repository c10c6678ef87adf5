#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "monofem/mesh.hpp"
#include "monofem/nonlinearity.hpp"
#include "monofem/solver.hpp"
#include "monofem/study.hpp"

namespace monofem {

/// Settings of one CLI run. Read from a flat "key = value" file ('#' starts a
/// comment); command-line flags override file values.
///
/// Keys and defaults:
///   domain              unit-square | unit-triangle | paper-pentagon | <polygon file>  (unit-square)
///   mesh                mesh file used instead of domain/level by `solve`        (none)
///   nonlinearity        power_law | none                            (required for solve/study)
///   scale exponent      power-law c > 0 and s in (0,1]                                  (1, 1)
///   shift weight        constant psi and phi >= 0                                       (0, 1)
///   cut_M               cut-off level M > 0                                              (none)
///   rhs                 constant <c> | manufactured                 (required for solve/study)
///   level               refinement level for mesh/solve                                     (0)
///   levels              <a>..<b> for study                                               (2..5)
///   reference           exact | fine+<k>                (exact if rhs is manufactured, else fine+2)
///   residual_tol max_newton slope_floor cg_tol continuation_sigma0 quad_degree
///                       solver overrides                              (SolverConfig defaults)
///   warm_start          true | false, study nested initial guesses                       (true)
///   output              output path                 (mesh.txt | solution.txt | study.csv)
///   threads             OpenMP thread count, 0 = runtime default                            (0)
struct RunConfig {
  std::string domain = "unit-square";
  std::optional<std::string> mesh_file;
  std::optional<std::string> nonlinearity;
  double scale = 1.0;
  double exponent = 1.0;
  double shift = 0.0;
  double weight = 1.0;
  std::optional<double> cut_M;
  std::optional<std::string> rhs;
  int level = 0;
  int level_min = 2;
  int level_max = 5;
  std::optional<std::string> reference;
  bool warm_start = true;
  SolverConfig solver;
  std::optional<std::string> output;
  int threads = 0;
};

/// Parses "key = value" lines into a map. InputError on malformed lines,
/// unknown or duplicate keys.
std::map<std::string, std::string> parse_config_entries(std::string_view text);

/// Applies entries on top of `base`. InputError names the offending key.
RunConfig apply_config_entries(const std::map<std::string, std::string>& entries, RunConfig base = {});

RunConfig parse_run_config(std::string_view text);

/// "<a>..<b>" with 0 <= a <= b.
std::pair<int, int> parse_levels(std::string_view spec);

/// nullopt for "exact", k for "fine+<k>" (k >= 1).
std::optional<int> parse_reference(std::string_view spec);

/// Domain polygon: preset name or polygon file.
Polygon resolve_domain(const RunConfig& cfg);

/// InputError("missing required key 'nonlinearity'") if absent.
Nonlinearity build_nonlinearity(const RunConfig& cfg);

/// Problem data for solve/study; manufactured rhs requires the unit square.
StudyProblem build_problem(const RunConfig& cfg);

}  // namespace monofem
