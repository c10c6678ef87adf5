#include "monofem/quadrature.hpp"

#include <cmath>

#include "monofem/error.hpp"

namespace monofem {

const QuadRule& centroid_rule() {
  static const QuadRule rule{"centroid", {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}}, {1.0}, 1};
  return rule;
}

const QuadRule& edge_midpoint_rule() {
  static const QuadRule rule{"edge-midpoint",
                             {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}},
                             {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
                             2};
  return rule;
}

const QuadRule& seven_point_rule() {
  static const QuadRule rule = [] {
    const double s = std::sqrt(15.0);
    const double a1 = (6.0 - s) / 21.0, b1 = (9.0 + 2.0 * s) / 21.0;
    const double a2 = (6.0 + s) / 21.0, b2 = (9.0 - 2.0 * s) / 21.0;
    const double w1 = (155.0 - s) / 1200.0;
    const double w2 = (155.0 + s) / 1200.0;
    QuadRule r;
    r.name = "seven-point";
    r.degree = 5;
    r.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
                {a1, a1, b1}, {a1, b1, a1}, {b1, a1, a1},
                {a2, a2, b2}, {a2, b2, a2}, {b2, a2, a2}};
    r.weights = {9.0 / 40.0, w1, w1, w1, w2, w2, w2};
    return r;
  }();
  return rule;
}

std::span<const QuadRule* const> shipped_rules() {
  static const QuadRule* const rules[] = {&centroid_rule(), &edge_midpoint_rule(),
                                          &seven_point_rule()};
  return rules;
}

const QuadRule& rule_of_degree(int degree) {
  for (const QuadRule* r : shipped_rules()) {
    if (r->degree >= degree) return *r;
  }
  throw InputError("no quadrature rule of degree " + std::to_string(degree) +
                   " (highest shipped degree is 5)");
}

std::vector<std::array<double, 3>> barycentric_lattice(int degree) {
  std::vector<std::array<double, 3>> pts;
  if (degree <= 0) return {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
  const double inv = 1.0 / degree;
  for (int i = 0; i <= degree; ++i) {
    for (int j = 0; j <= degree - i; ++j) {
      const int k = degree - i - j;
      pts.push_back({i * inv, j * inv, k * inv});
    }
  }
  return pts;
}

}  // namespace monofem
