#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "monofem/geometry.hpp"

namespace monofem {

/// Interval [-rho, rho] on which d(x, .) is Lipschitz with constant L.
struct LipschitzBand {
  double rho = 0.0;
  double lipschitz = 0.0;
};

/// Pointwise nonlinearity d(x, u), non-decreasing in u. Cheap to copy; the
/// evaluation callable must be reentrant.
class Nonlinearity {
 public:
  using Fn = std::function<double(Point2, double)>;

  Nonlinearity(Fn fn, std::string description, bool claimed_monotone = true,
               std::optional<LipschitzBand> band = std::nullopt);

  double operator()(Point2 x, double u) const { return fn_(x, u); }
  double eval(Point2 x, double u) const { return fn_(x, u); }

  const std::string& description() const { return description_; }
  bool claimed_monotone() const { return claimed_monotone_; }
  const std::optional<LipschitzBand>& lipschitz_band() const { return band_; }

 private:
  Fn fn_;
  std::string description_;
  bool claimed_monotone_;
  std::optional<LipschitzBand> band_;
};

/// d(x,u) = weight(x) * scale * sgn(u - shift(x)) * |u - shift(x)|^exponent,
/// with sgn(0) = 0. Monotone whenever weight >= 0.
struct PowerLaw {
  ScalarField weight = [](Point2) { return 1.0; };
  ScalarField shift = [](Point2) { return 0.0; };
  double scale = 1.0;
  double exponent = 1.0;
  std::optional<LipschitzBand> band;
  std::string description;
};

/// sgn(t) |t|^s with sgn(0) = 0; uses cbrt/sqrt for s = 1/3, 1/2.
double signed_power(double t, double s);

double eval_power_law(const PowerLaw& p, Point2 x, double u);

/// Throws InputError unless scale > 0 and exponent in (0, 1].
Nonlinearity make_power_law(PowerLaw p);

/// d(x,u) = 50 sgn(u+1) |u+1|^(1/3): the non-Lipschitz benchmark absorption.
/// Lipschitz on [-1/2, 1/2] with L = 50/3 * (1/2)^(-2/3).
Nonlinearity benchmark_nonlinearity();

Nonlinearity zero_nonlinearity();

/// d(x,u) = lambda * u, lambda >= 0.
Nonlinearity linear_nonlinearity(double lambda);

/// Cut-off d_M: frozen at d(x,-M) below -M and at d(x,M) above M.
Nonlinearity cut(const Nonlinearity& d, double M);

struct MonotoneReport {
  bool pass = true;
  std::size_t points_checked = 0;
  /// First violation d(x,u_lo) > d(x,u_hi) + 1e-12, if any.
  struct Witness {
    Point2 x;
    double u_lo, u_hi;
    double d_lo, d_hi;
  };
  std::optional<Witness> witness;
};

/// Samples d on n equispaced u-values in [u_min, u_max] at every point.
MonotoneReport check_monotone(const Nonlinearity& d, std::span<const Point2> points, double u_min,
                              double u_max, int n);

}  // namespace monofem
