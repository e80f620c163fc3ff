#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "nsblowup/errors.hpp"

namespace nsblowup {

/// A: swirl k/r (non-smooth data on the axis).  B: swirl k r tau^{2a}.
enum class Family { A, B };

inline std::string_view to_string(Family f) { return f == Family::A ? "A" : "B"; }

inline Family family_from_string(std::string_view s) {
  if (s == "A" || s == "a") return Family::A;
  if (s == "B" || s == "b") return Family::B;
  throw InvalidParams("family must be A or B, got '" + std::string(s) + "'");
}

/// Constants of one explicit blowup solution. The constructor guarantees
/// a, k != 0 and t_star, nu > 0.
class SolutionParams {
 public:
  SolutionParams(double a, double k, double t_star, double nu, Family family)
      : a_(a), k_(k), t_star_(t_star), nu_(nu), family_(family) {
    if (!(std::isfinite(a) && std::isfinite(k) && std::isfinite(t_star) && std::isfinite(nu)))
      throw InvalidParams("solution parameters must be finite");
    if (a == 0.0) throw InvalidParams("strain strength a must be nonzero");
    if (k == 0.0) throw InvalidParams("swirl strength k must be nonzero");
    if (!(t_star > 0.0)) throw InvalidParams("blowup time t_star must be positive");
    if (!(nu > 0.0)) throw InvalidParams("viscosity nu must be positive");
  }

  double a() const noexcept { return a_; }
  double k() const noexcept { return k_; }
  double t_star() const noexcept { return t_star_; }
  double nu() const noexcept { return nu_; }
  Family family() const noexcept { return family_; }

  /// Smallest admissible time-to-blowup; evaluation requires tau >= this.
  double min_tau() const noexcept { return 1e-12 * t_star_; }

  /// tau = t_star - t after enforcing the time guard.
  double tau(double t) const {
    const double tau = t_star_ - t;
    if (!(tau >= min_tau()))
      throw EvaluationAtOrPastBlowup("t = " + std::to_string(t) +
                                     " is at or past the blowup time t_star = " +
                                     std::to_string(t_star_));
    return tau;
  }

  SolutionParams with_family(Family f) const { return {a_, k_, t_star_, nu_, f}; }
  SolutionParams with_k(double k) const { return {a_, k, t_star_, nu_, family_}; }
  SolutionParams with_a(double a) const { return {a, k_, t_star_, nu_, family_}; }

 private:
  double a_;
  double k_;
  double t_star_;
  double nu_;
  Family family_;
};

using Vec3 = std::array<double, 3>;
/// Row-major; m[i][j] = d v_i / d x_j for velocity gradients.
using Mat3 = std::array<std::array<double, 3>, 3>;

struct CartPoint {
  double t = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  double r() const noexcept { return std::hypot(x1, x2); }
};

struct CylPoint {
  double t = 0.0;
  double r = 0.0;
  double z = 0.0;
};

inline CylPoint to_cyl(const CartPoint& q) { return {q.t, q.r(), q.x3}; }

enum class Frame { Cartesian, Cylindrical };

/// Values at one spacetime point. In the cylindrical frame vector and tensor
/// entries are components along (e_r, e_theta, e_z) with
/// e_theta = (x2/r, -x1/r, 0).
struct FieldSample {
  Frame frame = Frame::Cartesian;
  Vec3 velocity{};
  std::optional<Mat3> gradient;
  std::optional<double> pressure;
  std::optional<Vec3> vorticity;
};

inline double trace(const Mat3& m) { return m[0][0] + m[1][1] + m[2][2]; }

inline double max_abs(const Vec3& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

inline double max_abs(const Mat3& m) {
  double out = 0.0;
  for (const auto& row : m)
    for (double x : row) out = std::max(out, std::abs(x));
  return out;
}

}  // namespace nsblowup
