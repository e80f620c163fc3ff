#pragma once

// Flat key=value configuration. '#' starts a comment; blank lines are
// ignored; unknown keys are errors carrying their line number.

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nsblowup/axisym/solver.hpp"

namespace nsblowup::axisym {

struct DefaultEntry {
  std::string_view key;
  std::string_view value;
  std::string_view help;
};

/// Every recognised key with its default. `auto` defers to the family.
inline constexpr std::array kDefaults = {
    DefaultEntry{"family", "B", "A (k/r swirl) or B (k r tau^{2a} swirl)"},
    DefaultEntry{"a", "1", "strain strength"},
    DefaultEntry{"k", "1", "swirl strength"},
    DefaultEntry{"t_star", "1", "blowup time"},
    DefaultEntry{"nu", "0.01", "viscosity"},
    DefaultEntry{"r_min", "auto", "inner radius; auto = 0 (B) or 0.5 (A)"},
    DefaultEntry{"r_max", "2", "outer radius"},
    DefaultEntry{"z_min", "-1", "lower z edge"},
    DefaultEntry{"z_max", "1", "upper z edge"},
    DefaultEntry{"nr", "65", "radial nodes"},
    DefaultEntry{"nz", "65", "axial nodes"},
    DefaultEntry{"t_end", "0.5", "final time of simulate/convergence"},
    DefaultEntry{"dt", "cfl", "fixed time step, or cfl"},
    DefaultEntry{"cfl_safety", "0.4", "fraction of the stability limit"},
    DefaultEntry{"scheme", "rk2_explicit", "rk2_explicit or imex_diffusion"},
    DefaultEntry{"advection", "central2", "central2, or upwind1 (first-order control)"},
    DefaultEntry{"poisson.method", "sparse_lu", "sparse_lu, gauss_seidel_sor or conjugate_gradient_like"},
    DefaultEntry{"poisson.tol", "1e-10", "relative residual tolerance"},
    DefaultEntry{"poisson.max_iters", "50000", "iteration cap of iterative methods"},
    DefaultEntry{"poisson.sor_omega", "1.7", "SOR relaxation factor"},
    DefaultEntry{"delta_min", "1e-3", "runs stop at least delta_min * t_star before blowup"},
    DefaultEntry{"max_steps", "2000000", "step cap per run"},
    DefaultEntry{"levels", "33,65,129", "convergence grids (nodes per direction)"},
    DefaultEntry{"order_min", "1.7", "lowest accepted observed order"},
    DefaultEntry{"order_max", "2.3", "highest accepted observed order"},
    DefaultEntry{"omega1_factor", "0", "if > 0, require max |omega1| <= factor * poisson.tol"},
    DefaultEntry{"max_err_v1", "1e-2", "simulate: accepted final v1 error"},
    DefaultEntry{"deltas", "0.2,0.1,0.05,0.025", "blowup-fit distances to t_star"},
    DefaultEntry{"chase_quantity", "vr_sup", "vr_sup or v1_sup (interior nodes)"},
    DefaultEntry{"exponent_target", "-1", "blowup-fit expected exponent"},
    DefaultEntry{"exponent_tol", "0.05", "blowup-fit accepted deviation"},
    DefaultEntry{"n_samples", "1000", "residual-scan and pressure-check points"},
    DefaultEntry{"seed", "42", "sampling seed"},
    DefaultEntry{"fd_step", "1e-4", "relative finite-difference step"},
    DefaultEntry{"rel_tol", "1e-6", "normalised residual tolerance"},
    DefaultEntry{"abs_tol", "1e-10", "absolute residual tolerance"},
    DefaultEntry{"richardson_step", "1e-2", "coarse step of Richardson ratios; 0 disables"},
    DefaultEntry{"radii", "1,2,4", "energy-scan ball radii"},
    DefaultEntry{"energy_t", "0", "energy-scan time"},
    DefaultEntry{"energy_r_min", "auto", "energy-scan excluded radius; auto = 0 (B) or 0.1 (A)"},
    DefaultEntry{"quad_n", "64", "Gauss-Legendre order per direction"},
};

inline bool is_known_key(std::string_view key) {
  for (const auto& d : kDefaults)
    if (d.key == key) return true;
  return false;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in) {
    KeyValueConfig cfg;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const std::string text = detail::trim(std::string_view(raw).substr(0, raw.find('#')));
      if (text.empty()) continue;
      const auto eq = text.find('=');
      if (eq == std::string::npos) throw ConfigError("expected key = value", line);
      const std::string key = detail::trim(std::string_view(text).substr(0, eq));
      const std::string value = detail::trim(std::string_view(text).substr(eq + 1));
      if (key.empty()) throw ConfigError("missing key", line);
      if (!is_known_key(key)) throw ConfigError("unknown key '" + key + "'", line);
      if (value.empty()) throw ConfigError("missing value for '" + key + "'", line);
      cfg.entries_[key] = {value, line};
    }
    return cfg;
  }

  static KeyValueConfig parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
  }

  static KeyValueConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse(in);
  }

  /// Override from the command line (line 0).
  void set(const std::string& key, const std::string& value) {
    if (!is_known_key(key)) throw ConfigError("unknown key '" + key + "'");
    entries_[key] = {value, 0};
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string get_string(const std::string& key) const {
    if (auto it = entries_.find(key); it != entries_.end()) return it->second.value;
    for (const auto& d : kDefaults)
      if (d.key == key) return std::string(d.value);
    throw ConfigError("unknown key '" + key + "'");
  }

  double get_double(const std::string& key) const { return to_double(key, get_string(key)); }

  long get_long(const std::string& key) const {
    const std::string s = get_string(key);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail(key, "expected an integer, got '" + s + "'");
    return v;
  }

  std::vector<double> get_list(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(get_string(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, detail::trim(item)));
    if (out.empty()) fail(key, "expected a comma-separated list");
    return out;
  }

  /// Line of the entry, 0 for defaults and command-line overrides.
  int line(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(key + ": " + what, line(key));
  }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };

  double to_double(const std::string& key, const std::string& s) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::logic_error&) {
      fail(key, "expected a number, got '" + s + "'");
    }
  }

  std::map<std::string, Entry> entries_;
};

inline SolutionParams params_from(const KeyValueConfig& kv) {
  Family f{};
  try {
    f = family_from_string(kv.get_string("family"));
  } catch (const InvalidParams& e) {
    kv.fail("family", e.what());
  }
  try {
    return SolutionParams(kv.get_double("a"), kv.get_double("k"), kv.get_double("t_star"), kv.get_double("nu"), f);
  } catch (const InvalidParams& e) {
    throw ConfigError(e.what());
  }
}

/// Builds and validates a RunConfig; any invalid entry becomes a ConfigError.
inline RunConfig run_config_from(const KeyValueConfig& kv) {
  RunConfig c;
  c.params = params_from(kv);
  const std::string rmin = kv.get_string("r_min");
  c.grid.r_min = rmin == "auto" ? (c.params.family() == Family::A ? 0.5 : 0.0) : kv.get_double("r_min");
  c.grid.r_max = kv.get_double("r_max");
  c.grid.z_min = kv.get_double("z_min");
  c.grid.z_max = kv.get_double("z_max");
  c.grid.nr = static_cast<int>(kv.get_long("nr"));
  c.grid.nz = static_cast<int>(kv.get_long("nz"));
  c.t_end = kv.get_double("t_end");
  const std::string dt = kv.get_string("dt");
  c.dt_rule = dt == "cfl" ? DtRule::cfl(kv.get_double("cfl_safety")) : DtRule::fixed_dt(kv.get_double("dt"));
  try {
    c.scheme = time_scheme_from_string(kv.get_string("scheme"));
    c.advection = advection_from_string(kv.get_string("advection"));
    c.poisson.method = poisson_method_from_string(kv.get_string("poisson.method"));
  } catch (const InvalidParams& e) {
    throw ConfigError(e.what());
  }
  c.poisson.tol = kv.get_double("poisson.tol");
  c.poisson.max_iters = static_cast<int>(kv.get_long("poisson.max_iters"));
  c.poisson.sor_omega = kv.get_double("poisson.sor_omega");
  c.delta_min = kv.get_double("delta_min");
  c.max_steps = kv.get_long("max_steps");
  try {
    c.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return c;
}

}  // namespace nsblowup::axisym
