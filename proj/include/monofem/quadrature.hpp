#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace monofem {

/// Quadrature rule on a triangle in barycentric coordinates. Weights are
/// normalized to sum to one, so a rule is applied as area * sum(w_q f(x_q)).
struct QuadRule {
  std::string name;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

const QuadRule& centroid_rule();       // degree 1, 1 point
const QuadRule& edge_midpoint_rule();  // degree 2, 3 points
const QuadRule& seven_point_rule();    // degree 5, 7 points (Radon)

/// All shipped rules, ascending degree.
std::span<const QuadRule* const> shipped_rules();

/// Cheapest shipped rule of at least the requested degree; InputError if none.
const QuadRule& rule_of_degree(int degree);

/// Barycentric lattice of the given degree: all (i,j,k)/degree with i+j+k = degree.
std::vector<std::array<double, 3>> barycentric_lattice(int degree);

}  // namespace monofem
