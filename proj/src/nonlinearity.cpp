#include "monofem/nonlinearity.hpp"

#include <cmath>
#include <sstream>

#include "monofem/error.hpp"

namespace monofem {

Nonlinearity::Nonlinearity(Fn fn, std::string description, bool claimed_monotone,
                           std::optional<LipschitzBand> band)
    : fn_(std::move(fn)),
      description_(std::move(description)),
      claimed_monotone_(claimed_monotone),
      band_(band) {}

double signed_power(double t, double s) {
  if (t == 0.0) return 0.0;
  if (s == 1.0) return t;
  if (s == 1.0 / 3.0) return std::cbrt(t);
  const double m = s == 0.5 ? std::sqrt(std::abs(t)) : std::pow(std::abs(t), s);
  return t > 0.0 ? m : -m;
}

double eval_power_law(const PowerLaw& p, Point2 x, double u) {
  const double w = p.weight(x);
  if (w == 0.0) return 0.0;
  return w * p.scale * signed_power(u - p.shift(x), p.exponent);
}

Nonlinearity make_power_law(PowerLaw p) {
  if (!(p.scale > 0.0)) throw InputError("power law: scale must be positive");
  if (!(p.exponent > 0.0 && p.exponent <= 1.0)) {
    throw InputError("power law: exponent must lie in (0, 1]");
  }
  std::string desc = p.description;
  if (desc.empty()) {
    std::ostringstream s;
    s << "power_law(scale=" << p.scale << ", exponent=" << p.exponent << ")";
    desc = s.str();
  }
  auto band = p.band;
  return Nonlinearity([p = std::move(p)](Point2 x, double u) { return eval_power_law(p, x, u); },
                      std::move(desc), true, band);
}

Nonlinearity benchmark_nonlinearity() {
  PowerLaw p;
  p.scale = 50.0;
  p.exponent = 1.0 / 3.0;
  p.shift = [](Point2) { return -1.0; };
  p.band = LipschitzBand{0.5, 50.0 / 3.0 * std::pow(0.5, -2.0 / 3.0)};
  p.description = "50*sgn(u+1)*|u+1|^(1/3)";
  return make_power_law(std::move(p));
}

Nonlinearity zero_nonlinearity() {
  return Nonlinearity([](Point2, double) { return 0.0; }, "0", true, LipschitzBand{1e300, 0.0});
}

Nonlinearity linear_nonlinearity(double lambda) {
  if (!(lambda >= 0.0)) throw InputError("linear nonlinearity needs lambda >= 0");
  std::ostringstream s;
  s << lambda << "*u";
  return Nonlinearity([lambda](Point2, double u) { return lambda * u; }, s.str(), true,
                      LipschitzBand{1e300, lambda});
}

Nonlinearity cut(const Nonlinearity& d, double M) {
  if (!(M > 0.0)) throw InputError("cut: M must be positive");
  std::ostringstream s;
  s << "cut(" << d.description() << ", M=" << M << ")";
  return Nonlinearity(
      [d, M](Point2 x, double u) {
        if (u < -M) return d(x, -M);
        if (u > M) return d(x, M);
        return d(x, u);
      },
      s.str(), d.claimed_monotone(), d.lipschitz_band());
}

MonotoneReport check_monotone(const Nonlinearity& d, std::span<const Point2> points, double u_min,
                              double u_max, int n) {
  if (n < 2) throw InputError("check_monotone: need n >= 2");
  MonotoneReport report;
  for (const Point2 x : points) {
    ++report.points_checked;
    double u_prev = u_min;
    double d_prev = d(x, u_prev);
    for (int i = 1; i < n; ++i) {
      const double u = i == n - 1 ? u_max : u_min + (u_max - u_min) * i / (n - 1);
      const double v = d(x, u);
      if (d_prev > v + 1e-12) {
        report.pass = false;
        report.witness = MonotoneReport::Witness{x, u_prev, u, d_prev, v};
        return report;
      }
      u_prev = u;
      d_prev = v;
    }
  }
  return report;
}

}  // namespace monofem
