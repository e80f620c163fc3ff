#pragma once

// Method-of-lines integrator for
//   d_t v1 + v^r d_r v1 + v^z d_z v1 = nu L3 v1 + 2 v1 d_z phi1
//   d_t w1 + v^r d_r w1 + v^z d_z w1 = nu L3 w1 + d_z(v1^2)
//   -L3 phi1 = w1,  v^r = -r d_z phi1,  v^z = 2 phi1 + r d_r phi1
// with exact Dirichlet data on every non-axis edge.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "nsblowup/axisym/poisson.hpp"
#include "nsblowup/exact_fields.hpp"

namespace nsblowup::axisym {

enum class TimeScheme { rk2_explicit, imex_diffusion };
enum class AdvectionStencil { central2, upwind1 };

inline std::string_view to_string(TimeScheme s) {
  return s == TimeScheme::rk2_explicit ? "rk2_explicit" : "imex_diffusion";
}
inline std::string_view to_string(AdvectionStencil s) { return s == AdvectionStencil::central2 ? "central2" : "upwind1"; }

inline TimeScheme time_scheme_from_string(std::string_view s) {
  if (s == "rk2_explicit") return TimeScheme::rk2_explicit;
  if (s == "imex_diffusion") return TimeScheme::imex_diffusion;
  throw InvalidParams("unknown time scheme '" + std::string(s) + "'");
}
inline AdvectionStencil advection_from_string(std::string_view s) {
  if (s == "central2") return AdvectionStencil::central2;
  if (s == "upwind1") return AdvectionStencil::upwind1;
  throw InvalidParams("unknown advection stencil '" + std::string(s) + "'");
}

/// fixed: dt = value. cfl: dt = value * (stability limit).
struct DtRule {
  enum class Kind { fixed, cfl };
  Kind kind = Kind::cfl;
  double value = 0.4;

  static DtRule fixed_dt(double dt) { return {Kind::fixed, dt}; }
  static DtRule cfl(double safety) { return {Kind::cfl, safety}; }
};

struct RunConfig {
  SolutionParams params{1.0, 1.0, 1.0, 0.01, Family::B};
  Grid2D grid{};
  double t_end = 0.5;
  DtRule dt_rule{};
  TimeScheme scheme = TimeScheme::rk2_explicit;
  PoissonConfig poisson{};
  AdvectionStencil advection = AdvectionStencil::central2;
  /// Runs must stop at least delta_min * t_star before blowup.
  double delta_min = 1e-3;
  long max_steps = 2'000'000;

  void validate() const {
    grid.validate(params.family());
    poisson.validate();
    if (!(delta_min > 0.0)) throw InvalidParams("delta_min must be positive");
    if (!(t_end > 0.0)) throw InvalidParams("t_end must be positive");
    if (t_end > params.t_star() * (1.0 - delta_min))
      throw InvalidParams("t_end must stay at least delta_min * t_star before the blowup time");
    if (dt_rule.kind == DtRule::Kind::cfl && !(dt_rule.value > 0.0 && dt_rule.value < 1.0))
      throw InvalidParams("CFL safety must lie in (0, 1)");
    if (dt_rule.kind == DtRule::Kind::fixed && !(dt_rule.value > 0.0)) throw InvalidParams("fixed dt must be positive");
    if (max_steps < 1) throw InvalidParams("max_steps must be positive");
  }
};

struct State {
  Field2D v1;
  Field2D omega1;
  Field2D phi1;
  double time = 0.0;
};

struct ExactFields {
  Field2D v1;
  Field2D omega1;
  Field2D phi1;
};

inline ExactFields exact_fields(const SolutionParams& p, const Grid2D& g, double t) {
  ExactFields e{Field2D(g), Field2D(g), Field2D(g)};
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nz; ++j) {
      const TransformedFields f = transformed_exact(p, {t, g.r(i), g.z(j)});
      e.v1(i, j) = f.v1;
      e.omega1(i, j) = f.omega1;
      e.phi1(i, j) = f.phi1;
    }
  return e;
}

struct Tendencies {
  Field2D dv1;
  Field2D domega1;
};

namespace detail {

inline double advect(const Field2D& f, const Grid2D& g, int i, int j, double vr, double vz, AdvectionStencil s) {
  if (s == AdvectionStencil::central2) return vr * d_r(f, g, i, j) + vz * d_z(f, g, i, j);
  double fr = 0.0;
  if (!(i == 0 && g.has_axis()))
    fr = vr > 0.0 ? (f(i, j) - f(i - 1, j)) / g.hr() : (f(i + 1, j) - f(i, j)) / g.hr();
  const double fz = vz > 0.0 ? (f(i, j) - f(i, j - 1)) / g.hz() : (f(i, j + 1) - f(i, j)) / g.hz();
  return vr * fr + vz * fz;
}

}  // namespace detail

/// Semi-discrete right-hand sides at unknown nodes (zero elsewhere). The
/// velocities are recomputed from state.phi1. With include_diffusion false
/// only advection and sources are returned.
inline Tendencies rhs(const State& s, const SolutionParams& p, const Grid2D& g,
                      AdvectionStencil adv = AdvectionStencil::central2, bool include_diffusion = true) {
  const Velocities v = biot_savart_velocities(s.phi1, g);
  Tendencies out{Field2D(g), Field2D(g)};
  const double nu = p.nu();
  const double hz = g.hz();
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nz; ++j) {
      if (!g.is_unknown(i, j)) continue;
      const double vr = v.vr(i, j), vz = v.vz(i, j);
      const double v1 = s.v1(i, j);
      double dv = -detail::advect(s.v1, g, i, j, vr, vz, adv) + 2.0 * v1 * d_z(s.phi1, g, i, j);
      const double up = s.v1(i, j + 1), dn = s.v1(i, j - 1);
      double dw = -detail::advect(s.omega1, g, i, j, vr, vz, adv) + (up * up - dn * dn) / (2.0 * hz);
      if (include_diffusion) {
        dv += nu * apply_L3(s.v1, g, i, j);
        dw += nu * apply_L3(s.omega1, g, i, j);
      }
      out.dv1(i, j) = dv;
      out.domega1(i, j) = dw;
    }
  return out;
}

/// Owns the cached elliptic factorisations of one run.
class Integrator {
 public:
  explicit Integrator(RunConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    poisson_.emplace(cfg_.grid, 0.0, 1.0, cfg_.poisson);
  }

  const RunConfig& config() const { return cfg_; }
  const Grid2D& grid() const { return cfg_.grid; }
  const SolveStats& last_poisson() const { return poisson_->last(); }

  /// Exact v1, omega1 at time t; phi1 from the discrete Poisson problem.
  State exact_state(double t) {
    ExactFields e = exact_fields(cfg_.params, cfg_.grid, t);
    State s{e.v1, e.omega1, Field2D(cfg_.grid), t};
    s.phi1 = poisson_->solve(s.omega1, e.phi1, &e.phi1);
    return s;
  }

  /// Largest stable dt at this state (safety 1).
  double stability_limit(const State& s) const {
    const Grid2D& g = cfg_.grid;
    const Velocities v = biot_savart_velocities(s.phi1, g);
    const double vmax = std::max(v.vr.max_abs(), v.vz.max_abs());
    const double h = std::min(g.hr(), g.hz());
    double lim = vmax > 0.0 ? h / vmax : std::numeric_limits<double>::infinity();
    if (cfg_.scheme == TimeScheme::rk2_explicit) lim = std::min(lim, h * h / (4.0 * cfg_.params.nu()));
    return lim;
  }

  /// dt from the configured rule, clipped so the run lands on t_end.
  double choose_dt(const State& s) const {
    double dt = cfg_.dt_rule.kind == DtRule::Kind::fixed ? cfg_.dt_rule.value
                                                         : cfg_.dt_rule.value * stability_limit(s);
    const double remaining = cfg_.t_end - s.time;
    if (dt >= remaining * (1.0 - 1e-12)) dt = remaining;
    return dt;
  }

  State step(const State& s, double dt) {
    if (!(dt > 0.0)) throw InvalidParams("time step must be positive");
    const double lim = stability_limit(s);
    if (dt > lim * (1.0 + 1e-12))
      throw CflViolation("dt = " + std::to_string(dt) + " exceeds the stability limit " + std::to_string(lim));
    const double t1 = s.time + dt;
    const ExactFields bc = exact_fields(cfg_.params, cfg_.grid, t1);
    return cfg_.scheme == TimeScheme::rk2_explicit ? heun(s, dt, bc) : imex(s, dt, bc);
  }

 private:
  void close(State& u, const ExactFields& bc) {
    copy_boundary(cfg_.grid, bc.v1, u.v1);
    copy_boundary(cfg_.grid, bc.omega1, u.omega1);
    u.phi1 = poisson_->solve(u.omega1, bc.phi1, &u.phi1);
    if (!u.v1.all_finite() || !u.omega1.all_finite()) throw NoConvergence("non-finite state after step", 0, 0.0);
  }

  static Field2D axpy(const Field2D& x, double a, const Field2D& y) {
    Field2D out = x;
    for (std::size_t n = 0; n < out.data().size(); ++n) out.data()[n] += a * y.data()[n];
    return out;
  }

  State heun(const State& s, double dt, const ExactFields& bc) {
    const auto& g = cfg_.grid;
    const Tendencies k1 = rhs(s, cfg_.params, g, cfg_.advection);
    State u1{axpy(s.v1, dt, k1.dv1), axpy(s.omega1, dt, k1.domega1), s.phi1, s.time + dt};
    close(u1, bc);
    const Tendencies k2 = rhs(u1, cfg_.params, g, cfg_.advection);
    State u2{axpy(axpy(s.v1, 0.5 * dt, k1.dv1), 0.5 * dt, k2.dv1),
             axpy(axpy(s.omega1, 0.5 * dt, k1.domega1), 0.5 * dt, k2.domega1), u1.phi1, s.time + dt};
    close(u2, bc);
    return u2;
  }

  /// Heun on advection and sources, Crank-Nicolson on diffusion.
  State imex(const State& s, double dt, const ExactFields& bc) {
    const auto& g = cfg_.grid;
    const double c = 0.5 * dt * cfg_.params.nu();
    if (!helmholtz_ || helmholtz_->beta() != c) helmholtz_.emplace(g, 1.0, c, cfg_.poisson);
    const Field2D dv0 = discrete_L3(s.v1, g);
    const Field2D dw0 = discrete_L3(s.omega1, g);
    const Tendencies e1 = rhs(s, cfg_.params, g, cfg_.advection, false);

    State u1{Field2D(g), Field2D(g), s.phi1, s.time + dt};
    u1.v1 = helmholtz_->solve(axpy(axpy(s.v1, dt, e1.dv1), c, dv0), bc.v1, &s.v1);
    u1.omega1 = helmholtz_->solve(axpy(axpy(s.omega1, dt, e1.domega1), c, dw0), bc.omega1, &s.omega1);
    close(u1, bc);
    const Tendencies e2 = rhs(u1, cfg_.params, g, cfg_.advection, false);

    State u2{Field2D(g), Field2D(g), u1.phi1, s.time + dt};
    const Field2D fv = axpy(axpy(axpy(s.v1, 0.5 * dt, e1.dv1), 0.5 * dt, e2.dv1), c, dv0);
    const Field2D fw = axpy(axpy(axpy(s.omega1, 0.5 * dt, e1.domega1), 0.5 * dt, e2.domega1), c, dw0);
    u2.v1 = helmholtz_->solve(fv, bc.v1, &u1.v1);
    u2.omega1 = helmholtz_->solve(fw, bc.omega1, &u1.omega1);
    close(u2, bc);
    return u2;
  }

  RunConfig cfg_;
  std::optional<EllipticSolver> poisson_;
  std::optional<EllipticSolver> helmholtz_;
};

/// One step of a fresh integrator; convenient for tests.
inline State step(const State& s, const RunConfig& cfg, double dt) {
  Integrator it(cfg);
  return it.step(s, dt);
}

}  // namespace nsblowup::axisym
