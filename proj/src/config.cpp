#include "monofem/config.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "monofem/error.hpp"

namespace monofem {

namespace {

const std::set<std::string, std::less<>> kKnownKeys = {
    "domain",       "mesh",        "nonlinearity", "scale",  "exponent",
    "shift",        "weight",      "cut_M",        "rhs",    "level",
    "levels",       "reference",   "residual_tol", "max_newton", "slope_floor",
    "cg_tol",       "continuation_sigma0", "quad_degree", "warm_start", "output",
    "threads"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw InputError("key '" + key + "': expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

int to_int(const std::string& key, std::string_view v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw InputError("key '" + key + "': expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool to_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InputError("key '" + key + "': expected true or false, got '" + std::string(v) + "'");
}

}  // namespace

std::map<std::string, std::string> parse_config_entries(std::string_view text) {
  std::map<std::string, std::string> entries;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InputError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!kKnownKeys.contains(key)) {
      throw InputError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (value.empty()) {
      throw InputError("config line " + std::to_string(lineno) + ": key '" + key + "' has no value");
    }
    if (!entries.emplace(key, value).second) {
      throw InputError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  return entries;
}

std::pair<int, int> parse_levels(std::string_view spec) {
  const auto dots = spec.find("..");
  if (dots == std::string_view::npos) throw InputError("levels: expected '<a>..<b>', got '" + std::string(spec) + "'");
  const int a = to_int("levels", trim(spec.substr(0, dots)));
  const int b = to_int("levels", trim(spec.substr(dots + 2)));
  if (a < 0 || b < a) throw InputError("levels: need 0 <= min <= max, got '" + std::string(spec) + "'");
  return {a, b};
}

std::optional<int> parse_reference(std::string_view spec) {
  if (spec == "exact") return std::nullopt;
  if (spec.starts_with("fine+")) {
    const int k = to_int("reference", spec.substr(5));
    if (k < 1) throw InputError("reference: fine+<k> requires k >= 1");
    return k;
  }
  throw InputError("reference: expected 'exact' or 'fine+<k>', got '" + std::string(spec) + "'");
}

RunConfig apply_config_entries(const std::map<std::string, std::string>& entries, RunConfig cfg) {
  for (const auto& [key, value] : entries) {
    if (key == "domain") cfg.domain = value;
    else if (key == "mesh") cfg.mesh_file = value;
    else if (key == "nonlinearity") {
      if (value != "power_law" && value != "none") {
        throw InputError("key 'nonlinearity': expected power_law or none, got '" + value + "'");
      }
      cfg.nonlinearity = value;
    } else if (key == "scale") cfg.scale = to_double(key, value);
    else if (key == "exponent") cfg.exponent = to_double(key, value);
    else if (key == "shift") cfg.shift = to_double(key, value);
    else if (key == "weight") cfg.weight = to_double(key, value);
    else if (key == "cut_M") cfg.cut_M = to_double(key, value);
    else if (key == "rhs") cfg.rhs = value;
    else if (key == "level") cfg.level = to_int(key, value);
    else if (key == "levels") std::tie(cfg.level_min, cfg.level_max) = parse_levels(value);
    else if (key == "reference") {
      parse_reference(value);
      cfg.reference = value;
    } else if (key == "residual_tol") cfg.solver.residual_tol = to_double(key, value);
    else if (key == "max_newton") cfg.solver.max_newton = to_int(key, value);
    else if (key == "slope_floor") cfg.solver.slope_floor = to_double(key, value);
    else if (key == "cg_tol") cfg.solver.cg_tol = to_double(key, value);
    else if (key == "continuation_sigma0") cfg.solver.continuation_sigma0 = to_double(key, value);
    else if (key == "quad_degree") cfg.solver.quad_degree = to_int(key, value);
    else if (key == "warm_start") cfg.warm_start = to_bool(key, value);
    else if (key == "output") cfg.output = value;
    else if (key == "threads") cfg.threads = to_int(key, value);
  }
  if (cfg.level < 0) throw InputError("key 'level': must be non-negative");
  if (cfg.weight < 0.0) throw InputError("key 'weight': must be non-negative (monotonicity)");
  if (cfg.threads < 0) throw InputError("key 'threads': must be non-negative");
  cfg.solver.validate();
  return cfg;
}

RunConfig parse_run_config(std::string_view text) { return apply_config_entries(parse_config_entries(text)); }

Polygon resolve_domain(const RunConfig& cfg) {
  if (is_preset_polygon(cfg.domain)) return preset_polygon(cfg.domain);
  std::ifstream in(cfg.domain);
  if (!in) {
    throw InputError("domain '" + cfg.domain + "' is neither a preset nor a readable polygon file");
  }
  Polygon poly = read_polygon(in);
  validate_polygon(poly);
  return poly;
}

Nonlinearity build_nonlinearity(const RunConfig& cfg) {
  if (!cfg.nonlinearity) throw InputError("missing required key 'nonlinearity'");
  Nonlinearity d = zero_nonlinearity();
  if (*cfg.nonlinearity == "power_law") {
    PowerLaw p;
    p.scale = cfg.scale;
    p.exponent = cfg.exponent;
    const double w = cfg.weight, s = cfg.shift;
    p.weight = [w](Point2) { return w; };
    p.shift = [s](Point2) { return s; };
    // Lipschitz near zero whenever the kink sits away from the origin.
    if (p.exponent == 1.0) {
      p.band = LipschitzBand{1e300, w * p.scale};
    } else if (s != 0.0) {
      const double rho = 0.5 * std::abs(s);
      p.band = LipschitzBand{rho, w * p.scale * p.exponent * std::pow(rho, p.exponent - 1.0)};
    }
    std::ostringstream arg, desc;
    arg << "u";
    if (s > 0.0) arg << '-' << s;
    if (s < 0.0) arg << '+' << -s;
    if (w != 1.0) desc << w << '*';
    desc << p.scale << "*sgn(" << arg.str() << ")*|" << arg.str() << "|^" << std::setprecision(4) << p.exponent;
    p.description = desc.str();
    d = make_power_law(std::move(p));
  }
  if (cfg.cut_M) d = cut(d, *cfg.cut_M);
  return d;
}

StudyProblem build_problem(const RunConfig& cfg) {
  if (!cfg.rhs) throw InputError("missing required key 'rhs'");
  Nonlinearity d = build_nonlinearity(cfg);
  const std::string& rhs = *cfg.rhs;
  if (rhs == "manufactured") {
    if (cfg.domain != "unit-square") {
      throw InputError("rhs 'manufactured' is defined for the unit-square domain only");
    }
    return manufactured_sine_problem(std::move(d));
  }
  if (rhs.starts_with("constant")) {
    std::string_view v = trim(std::string_view(rhs).substr(8));
    const double c = to_double("rhs", v);
    return {resolve_domain(cfg), cfg.domain, std::move(d), [c](Point2) { return c; }, std::nullopt};
  }
  throw InputError("key 'rhs': expected 'constant <c>' or 'manufactured', got '" + rhs + "'");
}

}  // namespace monofem
