#pragma once

// Randomised residual scans over admissible spacetime points.

#include <algorithm>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "nsblowup/numeric/fd.hpp"

namespace nsblowup::num {

struct ResidualReport {
  std::string equation_id;
  int sample_count = 0;
  double max_abs = 0.0;
  double max_rel = 0.0;
  bool pass = true;
  CartPoint worst_point{};

  void add(double abs_value, double rel_value, const CartPoint& q) {
    ++sample_count;
    max_abs = std::max(max_abs, abs_value);
    if (rel_value >= max_rel) {
      max_rel = rel_value;
      worst_point = q;
    }
  }
  void finalize(const TolerancePolicy& pol) { pass = max_rel <= pol.rel_tol || max_abs <= pol.abs_tol; }
};

/// Observed Richardson ratios of one check over a scan.
struct RichardsonReport {
  std::string equation_id;
  int measurable = 0;
  int skipped = 0;  ///< refined residual within 100x of rounding noise
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double lo = 3.5;
  double hi = 4.5;
  bool pass = true;

  void add(const Richardson& r) {
    if (!r.measurable) {
      ++skipped;
      return;
    }
    if (measurable == 0) {
      min_ratio = max_ratio = r.ratio;
    } else {
      min_ratio = std::min(min_ratio, r.ratio);
      max_ratio = std::max(max_ratio, r.ratio);
    }
    ++measurable;
    pass = pass && r.ratio >= lo && r.ratio <= hi;
  }
};

/// Sampling box: t in [0, t_frac * t_star], r in [r_lo, r_hi], z in [z_lo, z_hi],
/// uniform azimuth.
struct SampleDomain {
  double t_frac = 0.95;
  double r_lo = 0.2;
  double r_hi = 3.0;
  double z_lo = -3.0;
  double z_hi = 3.0;
};

inline std::vector<CartPoint> sample_points(const SolutionParams& p, int n, std::uint64_t seed,
                                            const SampleDomain& dom = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<CartPoint> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double t = u(rng) * dom.t_frac * p.t_star();
    const double r = dom.r_lo + u(rng) * (dom.r_hi - dom.r_lo);
    const double z = dom.z_lo + u(rng) * (dom.z_hi - dom.z_lo);
    const double th = 2.0 * std::numbers::pi * u(rng);
    out.push_back({t, r * std::cos(th), r * std::sin(th), z});
  }
  return out;
}

/// Normalised residuals at one point, one entry per scanned equation.
struct PointResiduals {
  CartPoint point;
  double momentum = 0.0;
  double divergence = 0.0;
  double biot_savart = 0.0;
  double pressure_poisson = 0.0;
};

struct ScanResult {
  std::vector<PointResiduals> points;
  std::vector<ResidualReport> reports;
  std::vector<RichardsonReport> richardson;

  bool pass() const {
    return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; }) &&
           std::all_of(richardson.begin(), richardson.end(), [](const auto& r) { return r.pass; });
  }
};

/// Runs every FD check at each point under `pol`; Richardson ratios are
/// measured with steps richardson_step and richardson_step / 2 (0 disables).
inline ScanResult residual_scan(const SolutionParams& p, const TolerancePolicy& pol, int n, std::uint64_t seed,
                                double richardson_step = 1e-2, const SampleDomain& dom = {}) {
  pol.validate();
  if (n < 1) throw InvalidParams("residual scan needs at least one sample");
  ScanResult out;
  ResidualReport mom{"MOMENTUM"}, div{"DIVERGENCE"}, bs{"BIOT_SAVART"}, pp{"PRESSURE_POISSON"};
  RichardsonReport rmom{"MOMENTUM"}, rdiv{"DIVERGENCE"}, rbs{"BIOT_SAVART"}, rpp{"PRESSURE_POISSON"};
  const Normalization nm = pol.normalization;
  for (const CartPoint& q : sample_points(p, n, seed, dom)) {
    const CylPoint c = to_cyl(q);
    const auto m = fd_ns_residual(p, q, pol);
    const auto d = divergence_fd(p, q, pol);
    const auto b = biot_savart_check(p, c, pol);
    const auto s = pressure_poisson_consistency(p, q, pol);
    PointResiduals row{q, m.normalized_max(nm), d.normalized_max(nm), b.normalized_max(nm), s.normalized_max(nm)};
    mom.add(m.abs_max(), row.momentum, q);
    div.add(d.abs_max(), row.divergence, q);
    bs.add(b.abs_max(), row.biot_savart, q);
    pp.add(s.abs_max(), row.pressure_poisson, q);
    out.points.push_back(row);
    if (richardson_step > 0.0) {
      const TolerancePolicy rp = pol.with_step(richardson_step);
      rmom.add(richardson([&](const TolerancePolicy& x) { return fd_ns_residual(p, q, x); }, rp));
      rdiv.add(richardson([&](const TolerancePolicy& x) { return divergence_fd(p, q, x); }, rp));
      rbs.add(richardson([&](const TolerancePolicy& x) { return biot_savart_check(p, c, x); }, rp));
      rpp.add(richardson([&](const TolerancePolicy& x) { return pressure_poisson_consistency(p, q, x); }, rp));
    }
  }
  for (auto* r : {&mom, &div, &bs, &pp}) {
    r->finalize(pol);
    out.reports.push_back(*r);
  }
  if (richardson_step > 0.0) out.richardson = {rmom, rdiv, rbs, rpp};
  return out;
}

}  // namespace nsblowup::num
