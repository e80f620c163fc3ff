#pragma once

// Finite-difference residuals of the exact fields. Each check returns, per
// component, the residual value, the largest individual term (used for
// normalisation) and an estimate of the rounding noise of the stencils.

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "nsblowup/exact_fields.hpp"

namespace nsblowup::num {

enum class Normalization { max_term, unit };

struct TolerancePolicy {
  double abs_tol = 1e-10;
  double rel_tol = 1e-6;
  /// Relative step: h = fd_step * max(1, |x|) in space and
  /// h_t = fd_step * min(max(1, |t|), t_star - t) in time.
  double fd_step = 1e-4;
  Normalization normalization = Normalization::max_term;

  void validate() const {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (!(abs_tol > 0 && rel_tol > 0 && fd_step > 0))
      throw InvalidParams("tolerance policy entries must be positive");
    if (rel_tol < 100 * eps) throw InvalidParams("rel_tol must be at least 100 machine epsilon");
  }

  TolerancePolicy with_step(double h) const {
    TolerancePolicy out = *this;
    out.fd_step = h;
    return out;
  }
};

template <std::size_t N>
struct FdResidual {
  std::array<double, N> value{};
  std::array<double, N> scale{};  ///< max |term| entering each component
  std::array<double, N> noise{};  ///< estimated rounding error of each component

  double abs_max() const {
    double m = 0.0;
    for (double v : value) m = std::max(m, std::abs(v));
    return m;
  }
  double normalized(std::size_t i, Normalization n) const {
    if (n == Normalization::unit || scale[i] == 0.0) return std::abs(value[i]);
    return std::abs(value[i]) / scale[i];
  }
  double normalized_max(Normalization n) const {
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i) m = std::max(m, normalized(i, n));
    return m;
  }
  /// Euclidean norms used by the Richardson ratio.
  double value_norm() const {
    double s = 0.0;
    for (double v : value) s += v * v;
    return std::sqrt(s);
  }
  double noise_norm() const {
    double s = 0.0;
    for (double v : noise) s += v;
    return s;
  }
};

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

inline double rel_step(double fd_step, double x) { return fd_step * std::max(1.0, std::abs(x)); }

/// A derivative estimate together with its rounding noise.
struct Approx {
  double value = 0.0;
  double noise = 0.0;
};

inline Approx d1(double fp, double fm, double h) {
  return {(fp - fm) / (2.0 * h), kEps * (std::abs(fp) + std::abs(fm)) / (2.0 * h)};
}

inline Approx d2(double fp, double f0, double fm, double h) {
  return {(fp - 2.0 * f0 + fm) / (h * h), kEps * (std::abs(fp) + 2.0 * std::abs(f0) + std::abs(fm)) / (h * h)};
}

/// Accumulates terms of a residual component.
struct Accum {
  double value = 0.0;
  double scale = 0.0;
  double noise = 0.0;
  void add(double term, double term_noise = 0.0) {
    value += term;
    scale = std::max(scale, std::abs(term));
    noise += term_noise + 4.0 * kEps * std::abs(term);
  }
};

struct CartStencil {
  std::array<double, 3> h{};
  double ht = 0.0;
};

inline CartStencil cart_stencil(const SolutionParams& p, const CartPoint& q, double fd_step) {
  CartStencil s;
  s.h = {rel_step(fd_step, q.x1), rel_step(fd_step, q.x2), rel_step(fd_step, q.x3)};
  s.ht = std::min(rel_step(fd_step, q.t), fd_step * (p.t_star() - q.t));
  if (p.t_star() - (q.t + s.ht) < p.min_tau())
    throw StencilCrossesSingularity("time stencil reaches the blowup time");
  if (p.family() == Family::A && q.r() <= 10.0 * std::max(s.h[0], s.h[1]))
    throw StencilCrossesSingularity("spatial stencil too close to the axis for family A");
  return s;
}

inline CartPoint shifted(CartPoint q, int axis, double dx) {
  if (axis == 0) q.x1 += dx;
  if (axis == 1) q.x2 += dx;
  if (axis == 2) q.x3 += dx;
  return q;
}

/// FD Jacobian g[i][j] ~ d_j v_i with per-entry noise.
inline std::array<std::array<Approx, 3>, 3> fd_gradient(const SolutionParams& p, const CartPoint& q,
                                                        const CartStencil& s) {
  std::array<std::array<Approx, 3>, 3> g{};
  for (int j = 0; j < 3; ++j) {
    const Vec3 vp = velocity_cart(p, shifted(q, j, s.h[j]));
    const Vec3 vm = velocity_cart(p, shifted(q, j, -s.h[j]));
    for (int i = 0; i < 3; ++i) g[i][j] = d1(vp[i], vm[i], s.h[j]);
  }
  return g;
}

}  // namespace detail

/// Momentum residual d_t v + (v.grad) v + grad P - nu Lap v with second-order
/// central differences of velocity_cart and pressure_exact.
inline FdResidual<3> fd_ns_residual(const SolutionParams& p, const CartPoint& q,
                                    const TolerancePolicy& pol, bool with_pressure = true) {
  using namespace detail;
  const CartStencil s = cart_stencil(p, q, pol.fd_step);
  const Vec3 v0 = velocity_cart(p, q);
  const auto grad = fd_gradient(p, q, s);
  CartPoint qp = q, qm = q;
  qp.t += s.ht;
  qm.t -= s.ht;
  const Vec3 vtp = velocity_cart(p, qp);
  const Vec3 vtm = velocity_cart(p, qm);

  std::array<Approx, 3> dp{};
  if (with_pressure)
    for (int i = 0; i < 3; ++i)
      dp[i] = d1(pressure_exact(p, shifted(q, i, s.h[i])), pressure_exact(p, shifted(q, i, -s.h[i])), s.h[i]);

  std::array<Vec3, 3> vplus{}, vminus{};
  for (int j = 0; j < 3; ++j) {
    vplus[j] = velocity_cart(p, shifted(q, j, s.h[j]));
    vminus[j] = velocity_cart(p, shifted(q, j, -s.h[j]));
  }

  FdResidual<3> out;
  for (int i = 0; i < 3; ++i) {
    Accum acc;
    const Approx dt = d1(vtp[i], vtm[i], s.ht);
    acc.add(dt.value, dt.noise);
    for (int j = 0; j < 3; ++j) acc.add(v0[j] * grad[i][j].value, std::abs(v0[j]) * grad[i][j].noise);
    if (with_pressure) acc.add(dp[i].value, dp[i].noise);
    for (int j = 0; j < 3; ++j) {
      const Approx lap = d2(vplus[j][i], v0[i], vminus[j][i], s.h[j]);
      acc.add(-p.nu() * lap.value, p.nu() * lap.noise);
    }
    out.value[i] = acc.value;
    out.scale[i] = acc.scale;
    out.noise[i] = acc.noise;
  }
  return out;
}

/// Central-difference divergence of velocity_cart.
inline FdResidual<1> divergence_fd(const SolutionParams& p, const CartPoint& q, const TolerancePolicy& pol) {
  using namespace detail;
  const CartStencil s = cart_stencil(p, q, pol.fd_step);
  const auto grad = fd_gradient(p, q, s);
  Accum acc;
  for (int i = 0; i < 3; ++i) acc.add(grad[i][i].value, grad[i][i].noise);
  return {{acc.value}, {acc.scale}, {acc.noise}};
}

/// Residuals of v^r = -d_z phi^theta and v^z = (1/r) d_r (r phi^theta), with
/// FD derivatives of the closed-form stream function.
inline FdResidual<2> biot_savart_check(const SolutionParams& p, const CylPoint& q, const TolerancePolicy& pol) {
  using namespace detail;
  const double hr = rel_step(pol.fd_step, q.r);
  const double hz = rel_step(pol.fd_step, q.z);
  if (q.r - hr < 0.0) throw StencilCrossesSingularity("radial stencil crosses the axis");
  const Vec3 v = velocity_cyl(p, q);
  const auto phi = [&](double r, double z) { return stream_phi_theta(p, {q.t, r, z}); };
  const Approx dz = d1(phi(q.r, q.z + hz), phi(q.r, q.z - hz), hz);
  const Approx dr_rphi = d1((q.r + hr) * phi(q.r + hr, q.z), (q.r - hr) * phi(q.r - hr, q.z), hr);

  FdResidual<2> out;
  Accum ar;
  ar.add(v[0]);
  ar.add(dz.value, dz.noise);
  Accum az;
  az.add(v[2]);
  az.add(-dr_rphi.value / q.r, dr_rphi.noise / q.r);
  out.value = {ar.value, az.value};
  out.scale = {ar.scale, az.scale};
  out.noise = {ar.noise, az.noise};
  return out;
}

/// -Lap_h P - sum_ij (D_j v_i)(D_i v_j) with FD Laplacian and FD gradients.
inline FdResidual<1> pressure_poisson_consistency(const SolutionParams& p, const CartPoint& q,
                                                  const TolerancePolicy& pol, double gauge_shift = 0.0) {
  using namespace detail;
  const CartStencil s = cart_stencil(p, q, pol.fd_step);
  const auto P = [&](const CartPoint& x) { return pressure_exact(p, x) + gauge_shift; };
  const double p0 = P(q);
  const auto grad = fd_gradient(p, q, s);
  Accum acc;
  for (int j = 0; j < 3; ++j) {
    const Approx lap = d2(P(shifted(q, j, s.h[j])), p0, P(shifted(q, j, -s.h[j])), s.h[j]);
    acc.add(-lap.value, lap.noise);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const auto& gij = grad[i][j];
      const auto& gji = grad[j][i];
      acc.add(-gij.value * gji.value, std::abs(gij.value) * gji.noise + std::abs(gji.value) * gij.noise);
    }
  return {{acc.value}, {acc.scale}, {acc.noise}};
}

/// Ratio |res(h)| / |res(h/2)| for one FD check; `measurable` is false when
/// the refined residual sits within 100x of its rounding noise.
struct Richardson {
  double ratio = 0.0;
  double coarse = 0.0;
  double fine = 0.0;
  bool measurable = false;
};

template <class Check>
Richardson richardson(Check&& check, const TolerancePolicy& pol) {
  const auto coarse = check(pol);
  const auto fine = check(pol.with_step(pol.fd_step / 2.0));
  Richardson out;
  out.coarse = coarse.value_norm();
  out.fine = fine.value_norm();
  out.measurable = out.fine > 100.0 * fine.noise_norm() && out.fine > 0.0;
  out.ratio = out.fine > 0.0 ? out.coarse / out.fine : 0.0;
  return out;
}

}  // namespace nsblowup::num
