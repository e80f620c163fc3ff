#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nsblowup/errors.hpp"
#include "nsblowup/params.hpp"

namespace nsblowup::axisym {

/// Vertex-centred tensor grid on [r_min, r_max] x [z_min, z_max].
struct Grid2D {
  double r_min = 0.0;
  double r_max = 2.0;
  double z_min = -1.0;
  double z_max = 1.0;
  int nr = 65;
  int nz = 65;

  double hr() const { return (r_max - r_min) / (nr - 1); }
  double hz() const { return (z_max - z_min) / (nz - 1); }
  double r(int i) const { return i == nr - 1 ? r_max : r_min + i * hr(); }
  double z(int j) const { return j == nz - 1 ? z_max : z_min + j * hz(); }
  bool has_axis() const { return r_min == 0.0; }
  int size() const { return nr * nz; }

  /// Nodes carrying unknowns: the interior, plus the axis column when r_min = 0.
  bool is_unknown(int i, int j) const {
    return j > 0 && j < nz - 1 && i < nr - 1 && (i > 0 || has_axis());
  }

  void validate(Family family) const {
    if (nr < 9 || nz < 9) throw InvalidParams("grid needs at least 9 nodes per direction");
    if (!(r_min >= 0.0 && r_max > r_min)) throw InvalidParams("grid needs 0 <= r_min < r_max");
    if (!(z_max > z_min)) throw InvalidParams("grid needs z_min < z_max");
    if (family == Family::A && r_min <= 0.0)
      throw AxisSingularity("family A runs must exclude the axis (r_min > 0)");
  }

  /// Same box with n - 1 scaled by 2^levels in both directions.
  Grid2D refined(int levels) const {
    Grid2D g = *this;
    for (int l = 0; l < levels; ++l) {
      g.nr = 2 * (g.nr - 1) + 1;
      g.nz = 2 * (g.nz - 1) + 1;
    }
    return g;
  }
};

/// Node values, z index fastest.
class Field2D {
 public:
  Field2D() = default;
  Field2D(int nr, int nz, double value = 0.0) : nr_(nr), nz_(nz), data_(static_cast<std::size_t>(nr) * nz, value) {}
  explicit Field2D(const Grid2D& g, double value = 0.0) : Field2D(g.nr, g.nz, value) {}

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * nz_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * nz_ + j]; }
  int nr() const { return nr_; }
  int nz() const { return nz_; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }
  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }

 private:
  int nr_ = 0;
  int nz_ = 0;
  std::vector<double> data_;
};

/// f(r, z) sampled at every node.
template <class F>
Field2D sample(const Grid2D& g, F&& f) {
  Field2D out(g);
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nz; ++j) out(i, j) = f(g.r(i), g.z(j));
  return out;
}

/// Copies boundary (non-unknown) nodes of `from` into `to`.
inline void copy_boundary(const Grid2D& g, const Field2D& from, Field2D& to) {
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nz; ++j)
      if (!g.is_unknown(i, j)) to(i, j) = from(i, j);
}

}  // namespace nsblowup::axisym
