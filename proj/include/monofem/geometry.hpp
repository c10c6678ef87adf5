#pragma once

#include <cmath>
#include <functional>

namespace monofem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }

/// Pointwise scalar data such as f(x) or an exact solution.
using ScalarField = std::function<double(Point2)>;
/// Pointwise vector data, used for gradients.
using VectorField = std::function<Point2(Point2)>;

}  // namespace monofem
