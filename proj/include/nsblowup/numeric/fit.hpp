#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nsblowup/exact_fields.hpp"

namespace nsblowup::num {

/// Least-squares line through (log x, log y): y ~ C x^exponent.
struct PowerLawFit {
  double amplitude = 0.0;
  double exponent = 0.0;
  double r2 = 0.0;
};

inline PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InsufficientSamples("power-law fit needs at least 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw NonPositiveQuantity("abscissa must be positive for a log-log fit");
    if (!(y[i] > 0.0)) throw NonPositiveQuantity("quantity must be positive for a log-log fit");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
    sx += lx.back();
    sy += ly.back();
    sxx += lx.back() * lx.back();
    sxy += lx.back() * ly.back();
  }
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0) throw InsufficientSamples("abscissae are all equal");
  const double slope = (n * sxy - sx * sy) / denom;
  const double icept = (sy - slope * sx) / n;
  const double mean = sy / n;
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    ss_tot += (ly[i] - mean) * (ly[i] - mean);
    const double e = ly[i] - (icept + slope * lx[i]);
    ss_res += e * e;
  }
  // Constant data is fit perfectly by a zero slope.
  const double r2 = ss_tot > 1e-28 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  return {std::exp(icept), slope, r2};
}

enum class FitQuantity { grad_sup, vr_at_probe, vz_at_probe, vtheta_at_probe };

inline std::string_view to_string(FitQuantity q) {
  switch (q) {
    case FitQuantity::grad_sup: return "grad_sup";
    case FitQuantity::vr_at_probe: return "vr_at_probe";
    case FitQuantity::vz_at_probe: return "vz_at_probe";
    case FitQuantity::vtheta_at_probe: return "vtheta_at_probe";
  }
  return "?";
}

inline FitQuantity fit_quantity_from_string(std::string_view s) {
  for (auto q : {FitQuantity::grad_sup, FitQuantity::vr_at_probe, FitQuantity::vz_at_probe,
                 FitQuantity::vtheta_at_probe})
    if (to_string(q) == s) return q;
  throw InvalidParams("unknown fit quantity '" + std::string(s) + "'");
}

/// Where a quantity is measured: a ball |x| <= ball_radius (points with
/// r < r_exclude skipped) for grad_sup, a single (r, z) probe otherwise.
struct ProbeRegion {
  double ball_radius = 1.0;
  double r_exclude = 0.0;
  double probe_r = 1.0;
  double probe_z = 1.0;
  int samples = 9;  ///< per direction of the ball sampling lattice
};

struct BlowupFit {
  FitQuantity quantity = FitQuantity::grad_sup;
  double amplitude_C = 0.0;
  double exponent = 0.0;
  double r2_goodness = 0.0;
};

/// sup over the sampled ball of max_ij |d_j v_i|.
inline double grad_sup(const SolutionParams& p, double t, const ProbeRegion& region) {
  const int n = std::max(2, region.samples);
  const double R = region.ball_radius;
  double sup = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const CartPoint q{t, -R + 2.0 * R * i / (n - 1), -R + 2.0 * R * j / (n - 1), -R + 2.0 * R * l / (n - 1)};
        if (q.x1 * q.x1 + q.x2 * q.x2 + q.x3 * q.x3 > R * R * (1 + 1e-12)) continue;
        if (q.r() < std::max(region.r_exclude, nsblowup::detail::kAxisRadius) && p.family() == Family::A) continue;
        sup = std::max(sup, max_abs(velocity_gradient_cart(p, q)));
      }
  return sup;
}

inline double measure(const SolutionParams& p, FitQuantity quantity, const ProbeRegion& region, double t) {
  const CylPoint probe{t, region.probe_r, region.probe_z};
  switch (quantity) {
    case FitQuantity::grad_sup: return grad_sup(p, t, region);
    case FitQuantity::vr_at_probe: return std::abs(velocity_cyl(p, probe)[0]);
    case FitQuantity::vz_at_probe: return std::abs(velocity_cyl(p, probe)[2]);
    case FitQuantity::vtheta_at_probe: return std::abs(velocity_cyl(p, probe)[1]);
  }
  return 0.0;
}

/// Fits |quantity| ~ C tau^exponent over the given sample times. Requires at
/// least six strictly increasing times before t_star spanning two decades
/// of tau.
inline BlowupFit blowup_fit(const SolutionParams& p, FitQuantity quantity, const ProbeRegion& region,
                            std::span<const double> times) {
  if (times.size() < 6) throw InsufficientSamples("blowup fit needs at least 6 sample times");
  std::vector<double> taus, values;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0 && !(times[i] > times[i - 1])) throw InsufficientSamples("sample times must be strictly increasing");
    taus.push_back(p.tau(times[i]));
    values.push_back(measure(p, quantity, region, times[i]));
  }
  if (std::log10(taus.front() / taus.back()) < 2.0 - 1e-9)
    throw InsufficientSamples("sample times must span at least two decades of t_star - t");
  const PowerLawFit f = fit_power_law(taus, values);
  return {quantity, f.amplitude, f.exponent, f.r2};
}

/// Times t_star - tau for tau log-spaced from tau_max down to tau_min.
inline std::vector<double> log_spaced_times(const SolutionParams& p, double tau_max, double tau_min, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    const double s = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out.push_back(p.t_star() - tau_max * std::pow(tau_min / tau_max, s));
  }
  return out;
}

}  // namespace nsblowup::num
