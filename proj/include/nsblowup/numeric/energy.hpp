#pragma once

#include <cmath>
#include <numbers>

#include "nsblowup/exact_fields.hpp"
#include "nsblowup/numeric/quadrature.hpp"

namespace nsblowup::num {

struct EnergyOptions {
  int quad_n = 64;
  /// Inner radius excluded from the ball. Family A needs r_min > 0: its
  /// swirl energy density k^2/(2 r^2) against r dr diverges like log(r).
  double r_min = 0.0;
  double self_check_tol = 1e-6;
  bool self_check = true;
};

namespace detail {

/// Ball energy at a fixed quadrature order. The meridional half-disk
/// {0 <= r <= R, |z| <= sqrt(R^2 - r^2)} is parametrised by r = R sin u,
/// z = s R cos u; with r_min > 0 the u-range is further log-mapped so the
/// 1/r swirl density becomes smooth.
inline double energy_ball_fixed(const SolutionParams& p, double t, double R, double r_min,
                                const GaussLegendre& gl) {
  const double u_lo = r_min > 0.0 ? std::asin(std::min(1.0, r_min / R)) : 0.0;
  const double u_hi = std::numbers::pi / 2.0;
  const auto density = [&](double r, double z) {
    const Vec3 v = velocity_cyl(p, {t, r, z});
    return 0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  };
  // Integrand in u: 2 pi r * (dr/du) * int_{-Z}^{Z} density dz, Z = R cos u.
  const auto in_u = [&](double u) {
    const double r = R * std::sin(u);
    const double zext = R * std::cos(u);
    if (r <= 0.0 || zext <= 0.0) return 0.0;
    const double column = gl.integrate([&](double s) { return density(r, s * zext); }, -1.0, 1.0) * zext;
    return 2.0 * std::numbers::pi * r * column * R * std::cos(u);
  };
  if (u_lo <= 0.0) return gl.integrate(in_u, u_lo, u_hi);
  // u = u_lo * (u_hi/u_lo)^sigma, du = u log(u_hi/u_lo) dsigma.
  const double span = std::log(u_hi / u_lo);
  return gl.integrate(
      [&](double sigma) {
        const double u = u_lo * std::exp(sigma * span);
        return in_u(u) * u * span;
      },
      0.0, 1.0);
}

}  // namespace detail

/// Kinetic energy int_{|x| <= R, r >= r_min} |v|^2 / 2 dx by tensor-product
/// Gauss-Legendre quadrature in cylindrical coordinates. The order is
/// doubled once as a self-check.
inline double energy_ball(const SolutionParams& p, double t, double R, const EnergyOptions& opt = {}) {
  p.tau(t);
  if (!(R > 0.0)) throw InvalidParams("ball radius must be positive");
  if (opt.r_min < 0.0 || opt.r_min >= R) throw InvalidParams("r_min must lie in [0, R)");
  if (p.family() == Family::A && opt.r_min <= 0.0)
    throw AxisSingularity("family A energy diverges at the axis; set r_min > 0");
  const GaussLegendre gl(opt.quad_n);
  const double e = detail::energy_ball_fixed(p, t, R, opt.r_min, gl);
  if (opt.self_check) {
    const double e2 = detail::energy_ball_fixed(p, t, R, opt.r_min, GaussLegendre(2 * opt.quad_n));
    if (std::abs(e2 - e) > opt.self_check_tol * std::abs(e2))
      throw QuadratureUnderResolved("energy quadrature changes by more than the tolerance when doubled", e, e2);
    return e2;
  }
  return e;
}

inline double energy_ball(const SolutionParams& p, double t, double R, int quad_n) {
  EnergyOptions opt;
  opt.quad_n = quad_n;
  return energy_ball(p, t, R, opt);
}

}  // namespace nsblowup::num
