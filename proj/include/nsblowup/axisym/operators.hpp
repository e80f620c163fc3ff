#pragma once

// Second-order stencils for the transformed axisymmetric system.

#include <utility>

#include "nsblowup/axisym/grid.hpp"

namespace nsblowup::axisym {

/// L3 f = f_rr + (3/r) f_r + f_zz at an unknown node. On the axis the
/// operator tends to 4 f_rr + f_zz; the mirror ghost f_{-1} = f_1 gives
/// 4 * 2 (f_1 - f_0) / hr^2.
inline double apply_L3(const Field2D& f, const Grid2D& g, int i, int j) {
  const double hr = g.hr(), hz = g.hz();
  const double fzz = (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / (hz * hz);
  if (i == 0 && g.has_axis()) return 8.0 * (f(1, j) - f(0, j)) / (hr * hr) + fzz;
  const double r = g.r(i);
  const double frr = (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / (hr * hr);
  const double fr = (f(i + 1, j) - f(i - 1, j)) / (2.0 * hr);
  return frr + 3.0 / r * fr + fzz;
}

/// L3 at every unknown node, zero elsewhere.
inline Field2D discrete_L3(const Field2D& f, const Grid2D& g) {
  Field2D out(g);
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nz; ++j)
      if (g.is_unknown(i, j)) out(i, j) = apply_L3(f, g, i, j);
  return out;
}

/// d/dr: central inside, one-sided second order on the r edges. On the
/// axis every field here is even in r, so the derivative vanishes.
inline double d_r(const Field2D& f, const Grid2D& g, int i, int j) {
  const double h = g.hr();
  if (i == 0) {
    if (g.has_axis()) return 0.0;
    return (-3.0 * f(0, j) + 4.0 * f(1, j) - f(2, j)) / (2.0 * h);
  }
  if (i == g.nr - 1) return (3.0 * f(i, j) - 4.0 * f(i - 1, j) + f(i - 2, j)) / (2.0 * h);
  return (f(i + 1, j) - f(i - 1, j)) / (2.0 * h);
}

inline double d_z(const Field2D& f, const Grid2D& g, int i, int j) {
  const double h = g.hz();
  if (j == 0) return (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) / (2.0 * h);
  if (j == g.nz - 1) return (3.0 * f(i, j) - 4.0 * f(i, j - 1) + f(i, j - 2)) / (2.0 * h);
  return (f(i, j + 1) - f(i, j - 1)) / (2.0 * h);
}

struct Velocities {
  Field2D vr;
  Field2D vz;
};

/// v^r = -r d_z phi1, v^z = 2 phi1 + r d_r phi1 on the full grid.
inline Velocities biot_savart_velocities(const Field2D& phi1, const Grid2D& g) {
  Velocities v{Field2D(g), Field2D(g)};
  for (int i = 0; i < g.nr; ++i) {
    const double r = g.r(i);
    for (int j = 0; j < g.nz; ++j) {
      v.vr(i, j) = -r * d_z(phi1, g, i, j);
      v.vz(i, j) = 2.0 * phi1(i, j) + r * d_r(phi1, g, i, j);
    }
  }
  return v;
}

/// d_r(r v^r) + d_z(r v^z) at interior nodes (axis excluded), zero elsewhere.
inline Field2D discrete_divergence(const Velocities& v, const Grid2D& g) {
  Field2D out(g);
  const double hr = g.hr(), hz = g.hz();
  for (int i = 1; i < g.nr - 1; ++i)
    for (int j = 1; j < g.nz - 1; ++j) {
      const double drr = (g.r(i + 1) * v.vr(i + 1, j) - g.r(i - 1) * v.vr(i - 1, j)) / (2.0 * hr);
      const double dzz = g.r(i) * (v.vz(i, j + 1) - v.vz(i, j - 1)) / (2.0 * hz);
      out(i, j) = drr + dzz;
    }
  return out;
}

}  // namespace nsblowup::axisym
