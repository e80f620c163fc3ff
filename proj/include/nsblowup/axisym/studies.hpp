#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "nsblowup/axisym/solver.hpp"
#include "nsblowup/numeric/fit.hpp"

namespace nsblowup::axisym {

struct ErrorSample {
  double time = 0.0;
  double err_v1_inf = 0.0;
  double err_v1_l2 = 0.0;
  double err_phi1_inf = 0.0;
  double err_omega1_inf = 0.0;
  double dt_used = 0.0;
};

struct ErrorSeries {
  std::vector<ErrorSample> samples;
  long steps = 0;
  double max_poisson_residual = 0.0;

  const ErrorSample& final() const { return samples.back(); }
  double max_omega1() const {
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, s.err_omega1_inf);
    return m;
  }
};

/// Infinity and grid-L2 (sqrt(hr hz sum e^2)) errors against the exact fields.
inline ErrorSample measure_error(const State& s, const SolutionParams& p, const Grid2D& g, double dt_used) {
  const ExactFields e = exact_fields(p, g, s.time);
  ErrorSample out;
  out.time = s.time;
  out.dt_used = dt_used;
  double l2 = 0.0;
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nz; ++j) {
      const double dv = s.v1(i, j) - e.v1(i, j);
      out.err_v1_inf = std::max(out.err_v1_inf, std::abs(dv));
      l2 += dv * dv;
      out.err_phi1_inf = std::max(out.err_phi1_inf, std::abs(s.phi1(i, j) - e.phi1(i, j)));
      out.err_omega1_inf = std::max(out.err_omega1_inf, std::abs(s.omega1(i, j) - e.omega1(i, j)));
    }
  out.err_v1_l2 = std::sqrt(l2 * g.hr() * g.hz());
  return out;
}

/// Runs from the exact data at t = 0 to cfg.t_end, recording the error
/// after every step. `on_step` (optional) sees every accepted state.
inline ErrorSeries run_manufactured(const RunConfig& cfg, const std::function<void(const State&)>& on_step = {},
                                   State* final_state = nullptr) {
  Integrator it(cfg);
  State s = it.exact_state(0.0);
  ErrorSeries series;
  series.samples.push_back(measure_error(s, cfg.params, cfg.grid, 0.0));
  while (s.time < cfg.t_end) {
    if (series.steps >= cfg.max_steps)
      throw BudgetExceeded("run exceeded max_steps = " + std::to_string(cfg.max_steps));
    const double dt = it.choose_dt(s);
    s = it.step(s, dt);
    if (dt == cfg.t_end - (s.time - dt)) s.time = cfg.t_end;
    ++series.steps;
    series.max_poisson_residual = std::max(series.max_poisson_residual, it.last_poisson().residual);
    series.samples.push_back(measure_error(s, cfg.params, cfg.grid, dt));
    if (on_step) on_step(s);
  }
  if (final_state) *final_state = s;
  return series;
}

struct LevelResult {
  int nr = 0;
  int nz = 0;
  double h = 0.0;
  long steps = 0;
  ErrorSample final{};
  double max_omega1 = 0.0;
};

/// Observed order of one field between consecutive levels. `exact` marks
/// both errors at the rounding floor, where no order is defined.
struct ObservedOrder {
  double order = 0.0;
  bool exact = false;
};

struct ConvergenceResult {
  std::vector<LevelResult> levels;
  std::vector<ObservedOrder> v1_orders;
  std::vector<ObservedOrder> phi1_orders;
  double order_lo = 1.7;
  double order_hi = 2.3;

  static bool ok(const std::vector<ObservedOrder>& orders, double lo, double hi) {
    for (const auto& o : orders)
      if (!o.exact && !(o.order >= lo && o.order <= hi)) return false;
    return true;
  }
  bool pass() const { return ok(v1_orders, order_lo, order_hi) && ok(phi1_orders, order_lo, order_hi); }
  double max_omega1() const {
    double m = 0.0;
    for (const auto& l : levels) m = std::max(m, l.max_omega1);
    return m;
  }
};

struct ConvergenceOptions {
  double order_lo = 1.7;
  double order_hi = 2.3;
  /// Errors below floor * (field scale) count as rounding.
  double floor = 1e-12;
  /// Every level runs with dt = dt0 * (h / h_coarsest)^dt_power. With a CFL
  /// rule dt0 is the safety-scaled stability limit of the coarsest grid at
  /// t_end, so all levels share one Courant-number schedule.
  double dt_power = 1.0;
};

inline ObservedOrder observed_order(double coarse, double fine, double floor) {
  if (coarse <= floor && fine <= floor) return {0.0, true};
  if (fine <= 0.0) return {std::numeric_limits<double>::infinity(), false};
  return {std::log2(coarse / fine), false};
}

/// Runs cfg on every grid (refinement ratio 2) and extracts observed orders
/// from the final-time infinity errors.
inline ConvergenceResult convergence_study(const RunConfig& cfg, const std::vector<Grid2D>& grids,
                                           const ConvergenceOptions& opt = {}) {
  if (grids.size() < 3) throw InvalidParams("convergence study needs at least 3 levels");
  for (std::size_t l = 1; l < grids.size(); ++l)
    if (grids[l].nr - 1 != 2 * (grids[l - 1].nr - 1) || grids[l].nz - 1 != 2 * (grids[l - 1].nz - 1))
      throw InvalidParams("convergence levels must refine by a factor of 2");
  ConvergenceResult out;
  out.order_lo = opt.order_lo;
  out.order_hi = opt.order_hi;
  const double h0 = grids.front().hr();
  double dt0 = cfg.dt_rule.value;
  if (cfg.dt_rule.kind == DtRule::Kind::cfl) {
    RunConfig c = cfg;
    c.grid = grids.front();
    Integrator it(c);
    dt0 = cfg.dt_rule.value * it.stability_limit(it.exact_state(cfg.t_end));
  }
  const ExactFields e = exact_fields(cfg.params, grids.front(), cfg.t_end);
  const double v_scale = std::max(1.0, e.v1.max_abs());
  const double phi_scale = std::max(1.0, e.phi1.max_abs());
  for (const Grid2D& g : grids) {
    RunConfig c = cfg;
    c.grid = g;
    c.dt_rule = DtRule::fixed_dt(dt0 * std::pow(g.hr() / h0, opt.dt_power));
    const ErrorSeries s = run_manufactured(c);
    out.levels.push_back({g.nr, g.nz, g.hr(), s.steps, s.final(), s.max_omega1()});
  }
  for (std::size_t l = 1; l < out.levels.size(); ++l) {
    const auto& a = out.levels[l - 1].final;
    const auto& b = out.levels[l].final;
    out.v1_orders.push_back(observed_order(a.err_v1_inf, b.err_v1_inf, opt.floor * v_scale));
    out.phi1_orders.push_back(observed_order(a.err_phi1_inf, b.err_phi1_inf, opt.floor * phi_scale));
  }
  return out;
}

enum class ChaseQuantity { vr_sup, v1_sup };

struct ChaseRow {
  double delta = 0.0;
  double tau = 0.0;
  double value = 0.0;
  double exact = 0.0;
  long steps = 0;
};

struct ChaseResult {
  std::vector<ChaseRow> rows;
  num::PowerLawFit fit;
};

/// For each delta, runs to t_star - delta under the CFL rule and records
/// sup |v^r| (or sup |v1|) over the unknown nodes of the numerical fields,
/// then fits value ~ C tau^exponent. Boundary nodes carry exact data and are
/// left out.
inline ChaseResult blowup_chase(const RunConfig& cfg, const std::vector<double>& deltas,
                                ChaseQuantity quantity = ChaseQuantity::vr_sup) {
  if (deltas.size() < 2) throw InsufficientSamples("blowup chase needs at least 2 deltas");
  const double t_star = cfg.params.t_star();
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] >= cfg.delta_min * t_star * (1.0 - 1e-12)))
      throw InvalidParams("delta below the floor delta_min * t_star");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) throw InvalidParams("deltas must be strictly decreasing");
    if (!(deltas[i] < t_star)) throw InvalidParams("delta must be smaller than t_star");
  }
  const Grid2D& g = cfg.grid;
  const auto value_of = [&](const Field2D& v1, const Field2D& phi1) {
    const Field2D& f = quantity == ChaseQuantity::v1_sup ? v1 : biot_savart_velocities(phi1, g).vr;
    double m = 0.0;
    for (int i = 0; i < g.nr; ++i)
      for (int j = 0; j < g.nz; ++j)
        if (g.is_unknown(i, j)) m = std::max(m, std::abs(f(i, j)));
    return m;
  };
  ChaseResult out;
  std::vector<double> taus, values;
  for (double d : deltas) {
    RunConfig c = cfg;
    c.t_end = t_star - d;
    if (c.dt_rule.kind != DtRule::Kind::cfl) c.dt_rule = DtRule::cfl(0.4);
    State fin;
    const ErrorSeries s = run_manufactured(c, {}, &fin);
    const ExactFields e = exact_fields(c.params, g, c.t_end);
    out.rows.push_back({d, d, value_of(fin.v1, fin.phi1), value_of(e.v1, e.phi1), s.steps});
    taus.push_back(d);
    values.push_back(out.rows.back().value);
  }
  out.fit = num::fit_power_law(taus, values);
  return out;
}

}  // namespace nsblowup::axisym
