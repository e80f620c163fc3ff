// nsblowup: command-line front end.
// Exit codes: 0 all checks passed, 1 a check failed, 2 usage or config error.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsblowup/axisym/config.hpp"
#include "nsblowup/axisym/studies.hpp"
#include "nsblowup/numeric/energy.hpp"
#include "nsblowup/numeric/scan.hpp"
#include "nsblowup/report/csv.hpp"
#include "nsblowup/symbolic/certify.hpp"
#include "nsblowup/version.hpp"

namespace fs = std::filesystem;
using namespace nsblowup;
using axisym::KeyValueConfig;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

constexpr const char* kOutEnv = "NSBLOWUP_OUT_DIR";

struct Common {
  std::string config;
  std::string out;
  std::map<std::string, std::string> flags;  // key -> value, already given on the command line
  std::vector<std::string> sets;
};

/// Options shared by every subcommand. Each flag maps onto a config key.
void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "key=value configuration file");
  sub->add_option("--out", c.out, std::string("output directory (default: $") + kOutEnv + " or .)");
  sub->add_option("--set", c.sets, "override any config key: --set key=value");
  for (const char* key : {"family", "a", "k", "t_star", "nu", "seed"}) {
    std::string flag = std::string("--") + key;
    for (auto& ch : flag)
      if (ch == '_') ch = '-';
    sub->add_option_function<std::string>(flag, [&c, key](const std::string& v) { c.flags[key] = v; },
                                          std::string("config key ") + key);
  }
}

KeyValueConfig load_config(const Common& c) {
  KeyValueConfig kv = c.config.empty() ? KeyValueConfig{} : KeyValueConfig::load(c.config);
  for (const auto& s : c.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    kv.set(s.substr(0, eq), s.substr(eq + 1));
  }
  for (const auto& [k, v] : c.flags) kv.set(k, v);
  return kv;
}

fs::path out_dir(const Common& c) {
  fs::path dir = c.out;
  if (dir.empty()) {
    const char* env = std::getenv(kOutEnv);
    dir = env && *env ? env : ".";
  }
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

std::string family_tag(const SolutionParams& p) { return std::string(to_string(p.family())); }

num::TolerancePolicy policy_from(const KeyValueConfig& kv) {
  num::TolerancePolicy pol;
  pol.abs_tol = kv.get_double("abs_tol");
  pol.rel_tol = kv.get_double("rel_tol");
  pol.fd_step = kv.get_double("fd_step");
  try {
    pol.validate();
  } catch (const InvalidParams& e) {
    throw ConfigError(e.what());
  }
  return pol;
}

int verify_symbolic(const KeyValueConfig& kv, const fs::path& dir, const std::optional<std::string>& vtheta) {
  const SolutionParams p = axisym::params_from(kv);
  auto forms = sym::AxisymClosedForms::family(p.family());
  if (vtheta) {
    sym::parse(*vtheta);  // syntax errors are usage errors
    forms.vtheta = *vtheta;
  }
  const sym::Certificate cert = sym::certify(p.family(), forms, sym::CartesianClosedForms::family(p.family()));
  const std::string text = sym::certificate_text(cert, kVersion);
  open_out(dir / ("certificate_" + family_tag(p) + ".txt")) << text;
  std::cout << text;
  if (cert.pass()) return kPass;
  for (const auto* group : {&cert.reduced, &cert.cartesian})
    for (const auto& r : *group)
      if (!r.is_zero) std::cerr << to_string(r.equation_id) << " FAIL " << sym::to_string(r.expr) << "\n";
  if (!cert.ansatz_ok) std::cerr << "ANSATZ_EXPONENTS FAIL\n";
  return kFail;
}

int residual_scan(const KeyValueConfig& kv, const fs::path& dir) {
  const SolutionParams p = axisym::params_from(kv);
  const num::TolerancePolicy pol = policy_from(kv);
  const long n = kv.get_long("n_samples");
  if (n < 1) kv.fail("n_samples", "must be at least 1");
  const auto seed = static_cast<std::uint64_t>(kv.get_long("seed"));
  const num::ScanResult res = num::residual_scan(p, pol, static_cast<int>(n), seed, kv.get_double("richardson_step"));

  const std::string comment = "seed=" + std::to_string(seed) + " " + report::params_echo(p);
  auto pts = open_out(dir / ("residual_scan_" + family_tag(p) + ".csv"));
  report::CsvWriter w(pts, comment, {"t", "x1", "x2", "x3", "momentum", "divergence", "biot_savart", "pressure_poisson"});
  for (const auto& r : res.points)
    w.row({r.point.t, r.point.x1, r.point.x2, r.point.x3, r.momentum, r.divergence, r.biot_savart, r.pressure_poisson});

  auto sum = open_out(dir / ("residual_scan_" + family_tag(p) + "_summary.csv"));
  report::CsvWriter s(sum, comment, {"kind", "equation_id", "count", "max_abs", "max_rel", "min_ratio", "max_ratio", "pass"});
  for (const auto& r : res.reports) {
    s.row({std::string("residual"), r.equation_id, static_cast<long>(r.sample_count), r.max_abs, r.max_rel, 0.0, 0.0,
           std::string(r.pass ? "PASS" : "FAIL")});
    std::cout << r.equation_id << (r.pass ? " PASS" : " FAIL") << " max_rel=" << r.max_rel << " max_abs=" << r.max_abs
              << "\n";
  }
  for (const auto& r : res.richardson) {
    s.row({std::string("richardson"), r.equation_id, static_cast<long>(r.measurable), 0.0, 0.0, r.min_ratio,
           r.max_ratio, std::string(r.pass ? "PASS" : "FAIL")});
    std::cout << "RICHARDSON " << r.equation_id << (r.pass ? " PASS" : " FAIL") << " measurable=" << r.measurable
              << " ratio=[" << r.min_ratio << ", " << r.max_ratio << "]\n";
  }
  std::cout << "OVERALL " << (res.pass() ? "PASS" : "FAIL") << "\n";
  return res.pass() ? kPass : kFail;
}

int pressure_check(const KeyValueConfig& kv, const fs::path& dir) {
  const SolutionParams p = axisym::params_from(kv);
  const num::TolerancePolicy pol = policy_from(kv);
  const long n = kv.get_long("n_samples");
  if (n < 1) kv.fail("n_samples", "must be at least 1");
  const auto seed = static_cast<std::uint64_t>(kv.get_long("seed"));
  auto out = open_out(dir / ("pressure_check_" + family_tag(p) + ".csv"));
  report::CsvWriter w(out, "seed=" + std::to_string(seed) + " " + report::params_echo(p),
                      {"t", "x1", "x2", "x3", "residual", "normalized", "residual_gauge_shifted"});
  num::ResidualReport rep{"PRESSURE_POISSON"};
  double gauge_diff = 0.0;
  for (const CartPoint& q : num::sample_points(p, static_cast<int>(n), seed)) {
    const auto r = num::pressure_poisson_consistency(p, q, pol);
    const auto rs = num::pressure_poisson_consistency(p, q, pol, 1.0);
    rep.add(r.abs_max(), r.normalized_max(pol.normalization), q);
    gauge_diff = std::max(gauge_diff, std::abs(rs.value[0] - r.value[0]) / std::max(1.0, r.scale[0]));
    w.row({q.t, q.x1, q.x2, q.x3, r.value[0], r.normalized_max(pol.normalization), rs.value[0]});
  }
  rep.finalize(pol);
  const bool gauge_ok = gauge_diff <= pol.rel_tol;
  std::cout << "PRESSURE_POISSON " << (rep.pass ? "PASS" : "FAIL") << " max_rel=" << rep.max_rel << "\n"
            << "GAUGE_INVARIANCE " << (gauge_ok ? "PASS" : "FAIL") << " max_change=" << gauge_diff << "\n";
  return rep.pass && gauge_ok ? kPass : kFail;
}

int energy_scan(const KeyValueConfig& kv, const fs::path& dir) {
  const SolutionParams p = axisym::params_from(kv);
  num::EnergyOptions opt;
  opt.quad_n = static_cast<int>(kv.get_long("quad_n"));
  const std::string rmin = kv.get_string("energy_r_min");
  opt.r_min = rmin == "auto" ? (p.family() == Family::A ? 0.1 : 0.0) : kv.get_double("energy_r_min");
  const double t = kv.get_double("energy_t");
  const std::vector<double> radii = kv.get_list("radii");
  auto out = open_out(dir / ("energy_scan_" + family_tag(p) + ".csv"));
  report::CsvWriter w(out, report::params_echo(p) + " t=" + report::format_number(t) +
                               " r_min=" + report::format_number(opt.r_min),
                      {"R", "energy", "ratio_to_previous"});
  bool increasing = true;
  double prev = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double e = num::energy_ball(p, t, radii[i], opt);
    if (i > 0 && !(e > prev && radii[i] > radii[i - 1])) increasing = false;
    w.row({radii[i], e, i > 0 ? e / prev : 0.0});
    std::cout << "R=" << radii[i] << " energy=" << e << "\n";
    prev = e;
  }
  std::cout << "STRICTLY_INCREASING " << (increasing ? "PASS" : "FAIL") << "\n";
  return increasing ? kPass : kFail;
}

bool omega1_ok(const KeyValueConfig& kv, const axisym::RunConfig& rc, double max_omega1) {
  const double factor = kv.get_double("omega1_factor");
  if (factor <= 0.0) return true;
  const bool ok = max_omega1 <= factor * rc.poisson.tol;
  std::cout << "OMEGA1_BOUND " << (ok ? "PASS" : "FAIL") << " max=" << max_omega1
            << " bound=" << factor * rc.poisson.tol << "\n";
  return ok;
}

int simulate(const KeyValueConfig& kv, const fs::path& dir) {
  const axisym::RunConfig rc = axisym::run_config_from(kv);
  const axisym::ErrorSeries s = axisym::run_manufactured(rc);
  auto out = open_out(dir / ("simulate_" + family_tag(rc.params) + ".csv"));
  report::CsvWriter w(out, report::params_echo(rc.params) + " nr=" + std::to_string(rc.grid.nr) +
                               " nz=" + std::to_string(rc.grid.nz),
                      {"time", "err_v1_inf", "err_v1_l2", "err_phi1_inf", "err_omega1_inf", "dt_used"});
  for (const auto& e : s.samples) w.row({e.time, e.err_v1_inf, e.err_v1_l2, e.err_phi1_inf, e.err_omega1_inf, e.dt_used});
  const double max_v1 = kv.get_double("max_err_v1");
  const bool v1_ok = s.final().err_v1_inf <= max_v1;
  std::cout << "steps=" << s.steps << " final err_v1_inf=" << s.final().err_v1_inf
            << " err_phi1_inf=" << s.final().err_phi1_inf << " max err_omega1_inf=" << s.max_omega1() << "\n"
            << "V1_ERROR " << (v1_ok ? "PASS" : "FAIL") << " bound=" << max_v1 << "\n";
  const bool ok = omega1_ok(kv, rc, s.max_omega1()) && v1_ok;
  return ok ? kPass : kFail;
}

int convergence(const KeyValueConfig& kv, const fs::path& dir) {
  const axisym::RunConfig rc = axisym::run_config_from(kv);
  std::vector<axisym::Grid2D> grids;
  for (double n : kv.get_list("levels")) {
    axisym::Grid2D g = rc.grid;
    g.nr = g.nz = static_cast<int>(n);
    grids.push_back(g);
  }
  axisym::ConvergenceOptions opt;
  opt.order_lo = kv.get_double("order_min");
  opt.order_hi = kv.get_double("order_max");
  const axisym::ConvergenceResult r = axisym::convergence_study(rc, grids, opt);
  auto out = open_out(dir / ("convergence_" + family_tag(rc.params) + ".csv"));
  report::CsvWriter w(out, report::params_echo(rc.params) + " t_end=" + report::format_number(rc.t_end),
                      {"nr", "nz", "h", "steps", "err_v1_inf", "err_v1_l2", "err_phi1_inf", "err_omega1_inf",
                       "order_v1", "order_phi1"});
  const auto order_text = [](const axisym::ObservedOrder& o) {
    return o.exact ? std::string("exact") : report::format_number(o.order);
  };
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    const auto& l = r.levels[i];
    w.row({static_cast<long>(l.nr), static_cast<long>(l.nz), l.h, l.steps, l.final.err_v1_inf, l.final.err_v1_l2,
           l.final.err_phi1_inf, l.max_omega1, i ? order_text(r.v1_orders[i - 1]) : std::string(""),
           i ? order_text(r.phi1_orders[i - 1]) : std::string("")});
    if (i) std::cout << "level " << l.nr << ": order_v1=" << order_text(r.v1_orders[i - 1])
                     << " order_phi1=" << order_text(r.phi1_orders[i - 1]) << "\n";
  }
  std::cout << "ORDERS " << (r.pass() ? "PASS" : "FAIL") << " range=[" << opt.order_lo << ", " << opt.order_hi
            << "]\n";
  const bool ok = omega1_ok(kv, rc, r.max_omega1()) && r.pass();
  return ok ? kPass : kFail;
}

int blowup_fit(const KeyValueConfig& kv, const fs::path& dir) {
  axisym::KeyValueConfig local = kv;
  // The chase ends close to t_star; t_end only has to be admissible.
  if (!kv.has("t_end")) local.set("t_end", "0.5");
  const axisym::RunConfig rc = axisym::run_config_from(local);
  const std::string q = kv.get_string("chase_quantity");
  axisym::ChaseQuantity quantity{};
  if (q == "vr_sup") quantity = axisym::ChaseQuantity::vr_sup;
  else if (q == "v1_sup") quantity = axisym::ChaseQuantity::v1_sup;
  else kv.fail("chase_quantity", "expected vr_sup or v1_sup");
  const axisym::ChaseResult r = axisym::blowup_chase(rc, kv.get_list("deltas"), quantity);
  auto out = open_out(dir / ("blowup_fit_" + family_tag(rc.params) + ".csv"));
  report::CsvWriter w(out, report::params_echo(rc.params) + " quantity=" + q, {"delta", "tau", "value", "exact", "steps"});
  for (const auto& row : r.rows) w.row({row.delta, row.tau, row.value, row.exact, row.steps});
  const double target = kv.get_double("exponent_target");
  const double tol = kv.get_double("exponent_tol");
  const bool ok = std::abs(r.fit.exponent - target) <= tol;
  std::cout << "exponent=" << r.fit.exponent << " amplitude=" << r.fit.amplitude << " r2=" << r.fit.r2 << "\n"
            << "EXPONENT " << (ok ? "PASS" : "FAIL") << " target=" << target << " tol=" << tol << "\n";
  return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification lab for two explicit blowup families of the 3D Navier-Stokes equations"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1, 1);

  Common common;
  std::optional<std::string> vtheta;
  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"verify-symbolic", "exact symbolic certificate of every governing identity"},
      {"residual-scan", "finite-difference residuals at random spacetime points"},
      {"simulate", "manufactured-solution run of the axisymmetric solver"},
      {"convergence", "observed orders over refined grids"},
      {"blowup-fit", "numerical blowup rate over a ladder of distances to t_star"},
      {"pressure-check", "pressure Poisson consistency and gauge invariance"},
      {"energy-scan", "kinetic energy in balls of growing radius"},
  };
  std::map<std::string, CLI::App*> apps;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, common);
    apps[s.name] = sub;
  }
  apps["verify-symbolic"]->add_option("--vtheta", vtheta, "replace the swirl closed form (test fixture)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    const KeyValueConfig kv = load_config(common);
    const fs::path dir = out_dir(common);
    if (apps["verify-symbolic"]->parsed()) return verify_symbolic(kv, dir, vtheta);
    if (apps["residual-scan"]->parsed()) return residual_scan(kv, dir);
    if (apps["simulate"]->parsed()) return simulate(kv, dir);
    if (apps["convergence"]->parsed()) return convergence(kv, dir);
    if (apps["blowup-fit"]->parsed()) return blowup_fit(kv, dir);
    if (apps["pressure-check"]->parsed()) return pressure_check(kv, dir);
    if (apps["energy-scan"]->parsed()) return energy_scan(kv, dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnknownIdentifier& e) {
    std::cerr << "unknown identifier: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
