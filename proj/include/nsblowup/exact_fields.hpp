#pragma once

// Closed-form evaluation of the two explicit blowup families and the exact
// quantities derived from them. All functions are pure.
//
//   v^r = a r / tau,   v^z = -2 a z / tau,   tau = t_star - t
//   v^theta = k / r                 (family A)
//   v^theta = k r tau^{2a}          (family B)
//   phi^theta = -a r z / tau,  omega^theta = 0
//
// The cylindrical basis follows e_theta = (x2/r, -x1/r, 0), which makes
// (e_r, e_theta, e_z) a left-handed triad: e_r x e_theta = -e_z.

#include <cmath>

#include "nsblowup/dual.hpp"
#include "nsblowup/params.hpp"

namespace nsblowup {

namespace detail {

/// Radii below this are treated as the axis.
inline constexpr double kAxisRadius = 1e-12;

inline void check_axis(const SolutionParams& p, double r) {
  if (p.family() == Family::A && r < kAxisRadius)
    throw AxisSingularity("family A swirl k/r is singular on the axis (r = " +
                          std::to_string(r) + ")");
}

/// tau^{e} for tau > 0 and any real e (negative a included).
template <class T>
T tau_pow(const T& tau, double e) {
  using std::exp;
  using std::log;
  return exp(e * log(tau));
}

template <class T>
T swirl(const SolutionParams& p, const T& tau, const T& r) {
  if (p.family() == Family::A) return p.k() / r;
  return p.k() * r * tau_pow(tau, 2.0 * p.a());
}

/// (v^r, v^theta, v^z) as generic arithmetic, used with Dual for exact
/// derivatives. No guards here; callers check admissibility.
template <class T>
std::array<T, 3> velocity_cyl_raw(const SolutionParams& p, const T& tau, const T& r, const T& z) {
  const double a = p.a();
  return {a * r / tau, swirl(p, tau, r), -2.0 * a * z / tau};
}

}  // namespace detail

inline Vec3 velocity_cyl(const SolutionParams& p, const CylPoint& q) {
  const double tau = p.tau(q.t);
  if (q.r < 0.0) throw InvalidParams("cylindrical radius must be non-negative");
  detail::check_axis(p, q.r);
  return detail::velocity_cyl_raw<double>(p, tau, q.r, q.z);
}

inline Vec3 velocity_cart(const SolutionParams& p, const CartPoint& q) {
  const double tau = p.tau(q.t);
  const double rho2 = q.x1 * q.x1 + q.x2 * q.x2;
  detail::check_axis(p, std::sqrt(rho2));
  const double a = p.a();
  const double k = p.k();
  // Swirl factor: v_swirl = s * (x2, -x1).
  const double s = p.family() == Family::A ? k / rho2 : k * detail::tau_pow(tau, 2.0 * a);
  return {a * q.x1 / tau + s * q.x2, a * q.x2 / tau - s * q.x1, -2.0 * a * q.x3 / tau};
}

/// Closed-form Jacobian, m[i][j] = d v_i / d x_j. For family B the swirl
/// entries carry tau^{2a} at the evaluation time.
inline Mat3 velocity_gradient_cart(const SolutionParams& p, const CartPoint& q) {
  const double tau = p.tau(q.t);
  const double x1 = q.x1;
  const double x2 = q.x2;
  const double rho2 = x1 * x1 + x2 * x2;
  detail::check_axis(p, std::sqrt(rho2));
  const double a = p.a();
  const double k = p.k();
  const double strain = a / tau;
  Mat3 g{};
  if (p.family() == Family::A) {
    const double rho4 = rho2 * rho2;
    const double cross = 2.0 * k * x1 * x2 / rho4;
    const double shear = k * (x1 * x1 - x2 * x2) / rho4;
    g[0] = {strain - cross, shear, 0.0};
    g[1] = {shear, strain + cross, 0.0};
  } else {
    const double s = k * detail::tau_pow(tau, 2.0 * a);
    g[0] = {strain, s, 0.0};
    g[1] = {-s, strain, 0.0};
  }
  g[2] = {0.0, 0.0, -2.0 * strain};
  return g;
}

inline double stream_phi_theta(const SolutionParams& p, const CylPoint& q) {
  const double tau = p.tau(q.t);
  return -p.a() * q.r * q.z / tau;
}

/// Vorticity curl(v) projected on (e_r, e_theta, e_z), computed by
/// differentiating velocity_cyl. With the left-handed basis
///   w_r = d_z v^theta,  w_theta = d_r v^z - d_z v^r,
///   w_z = -(1/r) d_r (r v^theta).
inline Vec3 vorticity_cyl(const SolutionParams& p, const CylPoint& q) {
  const double tau = p.tau(q.t);
  if (q.r < 0.0) throw InvalidParams("cylindrical radius must be non-negative");
  detail::check_axis(p, q.r);
  using D = Dual<double>;
  const auto dr = detail::velocity_cyl_raw<D>(p, D(tau), D::variable(q.r), D(q.z));
  const auto dz = detail::velocity_cyl_raw<D>(p, D(tau), D(q.r), D::variable(q.z));
  const double vth = dr[1].val;
  const double dvth_dr = dr[1].der;
  // (1/r) d_r(r f) = f/r + f_r, and -> 2 f_r on the axis where f(0) = 0.
  const double axial = q.r > 0.0 ? vth / q.r + dvth_dr : 2.0 * dvth_dr;
  return {dz[1].der, dr[2].der - dz[0].der, -axial};
}

/// Cartesian curl from the closed-form Jacobian.
inline Vec3 vorticity_cart(const SolutionParams& p, const CartPoint& q) {
  const Mat3 g = velocity_gradient_cart(p, q);
  return {g[2][1] - g[1][2], g[0][2] - g[2][0], g[1][0] - g[0][1]};
}

/// Pressure with the gauge P -> 0 at the origin for the strain part:
///   P = -a(1+a) r^2 / (2 tau^2) - a(2a-1) z^2 / tau^2 + S(r, t)
///   S = -k^2 / (2 r^2)              (family A)
///   S = +k^2 tau^{4a} r^2 / 2       (family B)
inline double pressure_exact(const SolutionParams& p, const CylPoint& q) {
  const double tau = p.tau(q.t);
  detail::check_axis(p, q.r);
  const double a = p.a();
  const double k = p.k();
  const double r2 = q.r * q.r;
  const double tau2 = tau * tau;
  const double strain = -a * (1.0 + a) * r2 / (2.0 * tau2) - a * (2.0 * a - 1.0) * q.z * q.z / tau2;
  const double swirl = p.family() == Family::A
                           ? -k * k / (2.0 * r2)
                           : 0.5 * k * k * detail::tau_pow(tau, 4.0 * a) * r2;
  return strain + swirl;
}

inline double pressure_exact(const SolutionParams& p, const CartPoint& q) {
  return pressure_exact(p, to_cyl(q));
}

/// Unknowns of the odd-symmetry transformed system:
/// v1 = v^theta / r, omega1 = omega^theta / r, phi1 = phi^theta / r.
struct TransformedFields {
  double v1 = 0.0;
  double omega1 = 0.0;
  double phi1 = 0.0;
};

inline TransformedFields transformed_exact(const SolutionParams& p, const CylPoint& q) {
  const double tau = p.tau(q.t);
  detail::check_axis(p, q.r);
  const double v1 = p.family() == Family::A ? p.k() / (q.r * q.r)
                                            : p.k() * detail::tau_pow(tau, 2.0 * p.a());
  return {v1, 0.0, -p.a() * q.z / tau};
}

namespace detail {

/// Columns are e_r, e_theta, e_z expressed in Cartesian components.
inline Mat3 cyl_basis(double x1, double x2) {
  const double r = std::hypot(x1, x2);
  if (r < kAxisRadius) throw AxisSingularity("cylindrical basis undefined on the axis");
  const double c = x1 / r;
  const double s = x2 / r;
  return {{{c, s, 0.0}, {s, -c, 0.0}, {0.0, 0.0, 1.0}}};
}

inline Vec3 mul(const Mat3& m, const Vec3& v) {
  Vec3 out{};
  for (int i = 0; i < 3; ++i) out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
  return out;
}

inline Mat3 transpose(const Mat3& m) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = m[j][i];
  return out;
}

inline Mat3 mul(const Mat3& x, const Mat3& y) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) out[i][j] += x[i][l] * y[l][j];
  return out;
}

}  // namespace detail

/// Re-expresses a sample in the other frame at Cartesian location `q`.
/// Scalars pass through; vectors rotate; tensors transform as Q G Q^T.
inline FieldSample basis_convert(const FieldSample& sample, const CartPoint& q) {
  const Mat3 basis = detail::cyl_basis(q.x1, q.x2);
  // to_cart maps cylindrical components to Cartesian ones.
  const Mat3 to_cart = basis;
  const Mat3 to_cyl = detail::transpose(basis);
  const Mat3& rot = sample.frame == Frame::Cylindrical ? to_cart : to_cyl;
  const Mat3& inv = sample.frame == Frame::Cylindrical ? to_cyl : to_cart;

  FieldSample out;
  out.frame = sample.frame == Frame::Cylindrical ? Frame::Cartesian : Frame::Cylindrical;
  out.velocity = detail::mul(rot, sample.velocity);
  out.pressure = sample.pressure;
  // Vorticity components are projections of the physical curl onto the
  // basis vectors, so they rotate like the velocity.
  if (sample.vorticity) out.vorticity = detail::mul(rot, *sample.vorticity);
  if (sample.gradient) out.gradient = detail::mul(detail::mul(rot, *sample.gradient), inv);
  return out;
}

inline FieldSample sample_cart(const SolutionParams& p, const CartPoint& q) {
  FieldSample s;
  s.frame = Frame::Cartesian;
  s.velocity = velocity_cart(p, q);
  s.gradient = velocity_gradient_cart(p, q);
  s.pressure = pressure_exact(p, q);
  s.vorticity = vorticity_cart(p, q);
  return s;
}

/// Cylindrical-frame sample; the gradient entry is omitted because the
/// physical-component tensor needs the angle (use basis_convert for it).
inline FieldSample sample_cyl(const SolutionParams& p, const CylPoint& q) {
  FieldSample s;
  s.frame = Frame::Cylindrical;
  s.velocity = velocity_cyl(p, q);
  s.pressure = pressure_exact(p, q);
  s.vorticity = vorticity_cyl(p, q);
  return s;
}

}  // namespace nsblowup
