#pragma once

// Exact certification of the blowup families: substitute the closed forms
// into each governing equation and reduce the residual to normal form.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "nsblowup/params.hpp"
#include "nsblowup/symbolic/calculus.hpp"

namespace nsblowup::sym {

enum class EquationId {
  VTHETA_TRANSPORT,
  OMEGA_TRANSPORT,
  PHI_POISSON,
  V1_TRANSPORT,
  OMEGA1_TRANSPORT,
  PHI1_POISSON,
  BIOT_SAVART_R,
  BIOT_SAVART_Z,
  INCOMPRESSIBILITY,
  NS_MOMENTUM_X1,
  NS_MOMENTUM_X2,
  NS_MOMENTUM_X3,
  NS_DIVERGENCE,
  PRESSURE_POISSON,
};

inline std::string_view to_string(EquationId id) {
  switch (id) {
    case EquationId::VTHETA_TRANSPORT: return "VTHETA_TRANSPORT";
    case EquationId::OMEGA_TRANSPORT: return "OMEGA_TRANSPORT";
    case EquationId::PHI_POISSON: return "PHI_POISSON";
    case EquationId::V1_TRANSPORT: return "V1_TRANSPORT";
    case EquationId::OMEGA1_TRANSPORT: return "OMEGA1_TRANSPORT";
    case EquationId::PHI1_POISSON: return "PHI1_POISSON";
    case EquationId::BIOT_SAVART_R: return "BIOT_SAVART_R";
    case EquationId::BIOT_SAVART_Z: return "BIOT_SAVART_Z";
    case EquationId::INCOMPRESSIBILITY: return "INCOMPRESSIBILITY";
    case EquationId::NS_MOMENTUM_X1: return "NS_MOMENTUM_X1";
    case EquationId::NS_MOMENTUM_X2: return "NS_MOMENTUM_X2";
    case EquationId::NS_MOMENTUM_X3: return "NS_MOMENTUM_X3";
    case EquationId::NS_DIVERGENCE: return "NS_DIVERGENCE";
    case EquationId::PRESSURE_POISSON: return "PRESSURE_POISSON";
  }
  return "?";
}

/// One certified equation. `expr` is the normal form of the first nonzero
/// component (the empty sum when all vanish); `components` holds every
/// residual the equation id covers (e.g. both forms of a Biot-Savart law).
struct SymbolicResidual {
  EquationId equation_id;
  Expr expr;
  bool is_zero = true;
  std::vector<Expr> components;
};

inline SymbolicResidual make_residual(EquationId id, const std::vector<Poly>& parts) {
  SymbolicResidual out{id, Expr{}, true, {}};
  for (const Poly& p : parts) {
    out.components.push_back(from_poly(p));
    if (!p.is_zero() && out.is_zero) {
      out.is_zero = false;
      out.expr = out.components.back();
    }
  }
  return out;
}

/// Closed forms of one axisymmetric family in text form. Overriding a field
/// builds test fixtures (e.g. a perturbed swirl).
struct AxisymClosedForms {
  std::string vr = "a*r/(Tstar-t)";
  std::string vtheta;
  std::string vz = "-2*a*z/(Tstar-t)";
  std::string phi_theta = "-a*r*z/(Tstar-t)";
  std::string omega_theta = "0";

  static AxisymClosedForms family(Family f) {
    AxisymClosedForms out;
    out.vtheta = f == Family::A ? "k/r" : "k*r*(Tstar-t)^(2*a)";
    return out;
  }
};

struct CartesianClosedForms {
  std::string v1;
  std::string v2;
  std::string v3 = "-2*a*x3/(Tstar-t)";
  std::string pressure;

  static CartesianClosedForms family(Family f) {
    CartesianClosedForms out;
    const std::string strain_p =
        "-a*(1+a)*(x1^2+x2^2)/(2*(Tstar-t)^2) - a*(2*a-1)*x3^2/(Tstar-t)^2";
    if (f == Family::A) {
      out.v1 = "a*x1/(Tstar-t) + k*x2/(x1^2+x2^2)";
      out.v2 = "a*x2/(Tstar-t) - k*x1/(x1^2+x2^2)";
      out.pressure = strain_p + " - k^2/(2*(x1^2+x2^2))";
    } else {
      out.v1 = "a*x1/(Tstar-t) + k*x2*(Tstar-t)^(2*a)";
      out.v2 = "a*x2/(Tstar-t) - k*x1*(Tstar-t)^(2*a)";
      out.pressure = strain_p + " + k^2*(Tstar-t)^(4*a)*(x1^2+x2^2)/2";
    }
    return out;
  }
};

namespace detail {

inline Poly P(const std::string& text) { return to_poly(parse(text)); }
inline Poly sym(Symbol s) { return Poly::symbol(s); }
inline Poly r_pow(long n) { return Poly::symbol(Symbol::r, Exponent::constant(n)); }
inline Poly d(const Poly& f, Symbol v) { return differentiate(f, v); }

/// Transport operator d_t f + v^r d_r f + v^z d_z f.
inline Poly material(const Poly& f, const Poly& vr, const Poly& vz) {
  return d(f, Symbol::t) + vr * d(f, Symbol::r) + vz * d(f, Symbol::z);
}

}  // namespace detail

/// V1_TRANSPORT residual for arbitrary closed forms of v1 and phi1.
inline Poly v1_transport_residual(const Poly& v1, const Poly& phi1, const Poly& vr, const Poly& vz) {
  using namespace detail;
  return material(v1, vr, vz) - sym(Symbol::nu) * cyl_operator(v1, CylOp::laplacian_3r) -
         Rational(2) * (v1 * d(phi1, Symbol::z));
}

/// Residuals of the reduced system, its odd-symmetry transform, both
/// Biot-Savart laws, and the incompressibility condition, with the closed
/// forms substituted. All nine vanish identically for a true solution.
inline std::vector<SymbolicResidual> build_reduced_residuals(const AxisymClosedForms& forms) {
  using namespace detail;
  const Poly vr = P(forms.vr);
  const Poly vth = P(forms.vtheta);
  const Poly vz = P(forms.vz);
  const Poly phi = P(forms.phi_theta);
  const Poly om = P(forms.omega_theta);
  const Poly nu = sym(Symbol::nu);
  const Poly r = sym(Symbol::r);
  const Poly inv_r = r_pow(-1);

  // Transformed unknowns, derived rather than restated.
  const Poly v1 = vth * inv_r;
  const Poly om1 = om * inv_r;
  const Poly phi1 = phi * inv_r;

  const auto Lm = [](const Poly& f) { return cyl_operator(f, CylOp::laplacian_minus_r2); };
  const auto L3 = [](const Poly& f) { return cyl_operator(f, CylOp::laplacian_3r); };

  std::vector<SymbolicResidual> out;
  out.push_back(make_residual(EquationId::VTHETA_TRANSPORT,
                              {material(vth, vr, vz) - nu * Lm(vth) + vr * vth * inv_r}));
  // omega^theta must also be the curl component d_z v^r - d_r v^z.
  out.push_back(make_residual(
      EquationId::OMEGA_TRANSPORT,
      {material(om, vr, vz) - nu * Lm(om) - Rational(2) * (inv_r * vth * d(vth, Symbol::z)) -
           inv_r * vr * om,
       om - (d(vr, Symbol::z) - d(vz, Symbol::r))}));
  out.push_back(make_residual(EquationId::PHI_POISSON, {Lm(phi) + om}));
  out.push_back(make_residual(EquationId::V1_TRANSPORT, {v1_transport_residual(v1, phi1, vr, vz)}));
  out.push_back(make_residual(EquationId::OMEGA1_TRANSPORT,
                              {material(om1, vr, vz) - nu * L3(om1) - d(v1 * v1, Symbol::z)}));
  out.push_back(make_residual(EquationId::PHI1_POISSON, {L3(phi1) + om1}));
  out.push_back(make_residual(EquationId::BIOT_SAVART_R,
                              {vr + d(phi, Symbol::z), vr + r * d(phi1, Symbol::z)}));
  out.push_back(make_residual(
      EquationId::BIOT_SAVART_Z,
      {vz - inv_r * d(r * phi, Symbol::r), vz - Rational(2) * phi1 - r * d(phi1, Symbol::r)}));
  out.push_back(make_residual(EquationId::INCOMPRESSIBILITY,
                              {d(r * vr, Symbol::r) + d(r * vz, Symbol::z)}));
  return out;
}

inline std::vector<SymbolicResidual> build_reduced_residuals(Family f) {
  return build_reduced_residuals(AxisymClosedForms::family(f));
}

/// Momentum residuals d_t v_i + v.grad v_i + d_i P - nu Lap v_i, the
/// divergence, and the pressure Poisson identity
/// -Lap P - sum_ij d_j v_i d_i v_j, in Cartesian coordinates.
inline std::vector<SymbolicResidual> ns_cartesian_residual(const CartesianClosedForms& forms,
                                                           const Expr& pressure) {
  using namespace detail;
  const std::array<Symbol, 3> x{Symbol::x1, Symbol::x2, Symbol::x3};
  const std::array<Poly, 3> v{P(forms.v1), P(forms.v2), P(forms.v3)};
  const Poly pr = to_poly(pressure);
  const Poly nu = sym(Symbol::nu);

  std::array<std::array<Poly, 3>, 3> grad;  // grad[i][j] = d_j v_i
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) grad[i][j] = d(v[i], x[j]);

  std::vector<SymbolicResidual> out;
  const std::array<EquationId, 3> ids{EquationId::NS_MOMENTUM_X1, EquationId::NS_MOMENTUM_X2,
                                      EquationId::NS_MOMENTUM_X3};
  for (int i = 0; i < 3; ++i) {
    Poly res = d(v[i], Symbol::t) + d(pr, x[i]);
    for (int j = 0; j < 3; ++j) res = res + v[j] * grad[i][j] - nu * d(grad[i][j], x[j]);
    out.push_back(make_residual(ids[i], {res}));
  }
  out.push_back(make_residual(EquationId::NS_DIVERGENCE, {grad[0][0] + grad[1][1] + grad[2][2]}));
  Poly poisson;
  for (int j = 0; j < 3; ++j) poisson = poisson + d(d(pr, x[j]), x[j]);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) poisson = poisson + grad[i][j] * grad[j][i];
  out.push_back(make_residual(EquationId::PRESSURE_POISSON, {poisson}));
  return out;
}

inline std::vector<SymbolicResidual> ns_cartesian_residual(Family f) {
  const auto forms = CartesianClosedForms::family(f);
  return ns_cartesian_residual(forms, parse(forms.pressure));
}

// --- ansatz exponents ---

struct AnsatzSolution {
  Rational p;
  Expr beta;  // affine in a
};

/// Coefficient conditions of a residual: group terms by their spacetime
/// monomial (symbols t, r, z, x*, tau, Tstar) and return each parameter
/// polynomial with the nonzero factors a, k, nu divided out.
inline std::vector<Poly> coefficient_conditions(const Poly& residual) {
  std::map<Monomial, Poly> groups;
  for (const auto& [m, c] : residual.terms()) {
    Monomial spacetime;
    Monomial params;
    for (const auto& [s, e] : m) {
      const bool parameter = is_parameter(s) && s != Symbol::Tstar;
      (parameter ? params : spacetime).emplace(s, e);
    }
    auto& g = groups[spacetime];
    g = g + Poly::monomial(std::move(params), c);
  }
  std::vector<Poly> out;
  for (auto& [key, poly] : groups) {
    Monomial content;
    for (Symbol s : {Symbol::a, Symbol::k, Symbol::nu}) {
      std::optional<Rational> lowest;
      for (const auto& [m, c] : poly.terms()) {
        auto it = m.find(s);
        const Rational e = it == m.end() ? Rational(0) : it->second.c;
        lowest = lowest ? std::min(*lowest, e) : e;
      }
      if (lowest && *lowest != 0) content.emplace(s, Exponent::constant(-*lowest));
    }
    out.push_back(poly * Poly::monomial(content));
  }
  return out;
}

namespace detail {

/// Univariate polynomial in p as rational coefficients (index = degree), or
/// nullopt if other symbols occur.
inline std::optional<std::vector<Rational>> univariate_in_p(const Poly& poly) {
  std::vector<Rational> coeffs;
  for (const auto& [m, c] : poly.terms()) {
    long degree = 0;
    if (!m.empty()) {
      if (m.size() != 1 || m.begin()->first != Symbol::p || !m.begin()->second.is_integer())
        return std::nullopt;
      degree = m.begin()->second.c.convert_to<long>();
      if (degree < 0) return std::nullopt;
    }
    if (coeffs.size() <= static_cast<std::size_t>(degree)) coeffs.resize(degree + 1, Rational(0));
    coeffs[degree] = c;
  }
  if (coeffs.size() < 2) return std::nullopt;
  return coeffs;
}

inline std::vector<Integer> divisors(Integer n) {
  if (n < 0) n = -n;
  std::vector<Integer> out;
  if (n > 100000) throw ExponentNotSupported("rational-root search bound exceeded");
  for (Integer d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

/// All rational roots of sum coeffs[i] p^i.
inline std::set<Rational> rational_roots(std::vector<Rational> coeffs) {
  Integer lcm = 1;
  for (const auto& c : coeffs) lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(c));
  std::vector<Integer> ic;
  for (const auto& c : coeffs) ic.push_back(boost::multiprecision::numerator(Rational(c * lcm)));
  std::set<Rational> roots;
  while (!ic.empty() && ic.front() == 0) {
    roots.insert(0);
    ic.erase(ic.begin());
  }
  while (!ic.empty() && ic.back() == 0) ic.pop_back();
  if (ic.size() < 2) return roots;
  const auto eval_at = [&](const Rational& x) {
    Rational v = 0;
    for (std::size_t i = ic.size(); i-- > 0;) v = v * x + Rational(ic[i]);
    return v;
  };
  for (const auto& num : divisors(ic.front()))
    for (const auto& den : divisors(ic.back()))
      for (int sign : {1, -1}) {
        const Rational cand = Rational(num * sign, den);
        if (eval_at(cand) == 0) roots.insert(cand);
      }
  return roots;
}

}  // namespace detail

/// Exponent pairs (p, beta) for which v1 = k r^p tau^{-beta}, together with
/// phi1 = -a z / tau and the strain velocities, solves the v1 transport
/// equation identically.
inline std::vector<AnsatzSolution> ansatz_exponents() {
  using namespace detail;
  const Poly v1 = P("k*r^p*(Tstar-t)^(-beta)");
  const Poly phi1 = P("-a*z/(Tstar-t)");
  const Poly vr = P("a*r/(Tstar-t)");
  const Poly vz = P("-2*a*z/(Tstar-t)");
  const std::vector<Poly> conditions = coefficient_conditions(v1_transport_residual(v1, phi1, vr, vz));

  std::optional<std::vector<Rational>> p_poly;
  for (const auto& c : conditions)
    if ((p_poly = univariate_in_p(c))) break;
  if (!p_poly) throw Error("ansatz conditions contain no polynomial in p alone");

  std::vector<AnsatzSolution> out;
  for (const Rational& p0 : rational_roots(*p_poly)) {
    std::optional<Poly> beta;
    bool consistent = true;
    for (const auto& c : conditions) {
      const Poly reduced = substitute(c, Symbol::p, p0);
      if (reduced.is_zero()) continue;
      // reduced = c1 * beta + rest(a), c1 a nonzero constant.
      Poly c1;
      Poly rest;
      for (const auto& [m, coef] : reduced.terms()) {
        auto it = m.find(Symbol::beta);
        if (it == m.end()) {
          rest.add_term(m, coef);
        } else if (m.size() == 1 && it->second == Exponent::constant(1)) {
          c1.add_term({}, coef);
        } else {
          throw ExponentNotSupported("ansatz condition is not linear in beta");
        }
      }
      if (c1.is_zero()) {
        consistent = false;
        break;
      }
      const Poly solved = Rational(-1) / *c1.as_constant() * rest;
      if (beta && !(*beta == solved)) {
        consistent = false;
        break;
      }
      beta = solved;
    }
    if (consistent) out.push_back({p0, from_poly(beta ? *beta : Poly{})});
  }
  return out;
}

/// V1_TRANSPORT residual of the ansatz with (p, beta) substituted.
inline Poly ansatz_residual(const Poly& p_value, const Poly& beta_value) {
  using namespace detail;
  const Poly v1 = P("k*r^p*(Tstar-t)^(-beta)");
  Poly res = v1_transport_residual(v1, P("-a*z/(Tstar-t)"), P("a*r/(Tstar-t)"), P("-2*a*z/(Tstar-t)"));
  res = substitute(res, Symbol::p, p_value);
  return substitute(res, Symbol::beta, beta_value);
}

/// True if `found` equals {(-2, 0), (0, -2a)} exactly.
inline bool ansatz_matches_expected(const std::vector<AnsatzSolution>& found) {
  if (found.size() != 2) return false;
  const std::vector<std::pair<Rational, Expr>> expected{{-2, parse("0")}, {0, parse("-2*a")}};
  for (const auto& [p, beta] : expected) {
    const bool hit = std::any_of(found.begin(), found.end(), [&](const AnsatzSolution& s) {
      return s.p == p && equivalent(s.beta, beta);
    });
    if (!hit) return false;
  }
  return true;
}

// --- printed-versus-derived comparisons ---

/// A formula as printed in the source next to the one obtained by
/// differentiating the stated solution.
struct Discrepancy {
  std::string id;
  std::string quantity;
  Expr printed;
  Expr derived;
  bool mismatch = false;
};

inline std::vector<Discrepancy> printed_formula_checks() {
  using namespace detail;
  std::vector<Discrepancy> out;
  const auto add = [&](std::string id, std::string what, const std::string& printed, const Poly& derived) {
    const Expr pe = parse(printed);
    out.push_back({std::move(id), std::move(what), pe, from_poly(derived), !(to_poly(pe) == derived)});
  };
  const auto fb = CartesianClosedForms::family(Family::B);
  const Poly v1b = P(fb.v1);
  const Poly v2b = P(fb.v2);
  add("GRADIENT_B_SWIRL", "d v_1 / d x_2 (family B)", "k*Tstar^(2*a)", d(v1b, Symbol::x2));
  add("GRADIENT_B_SWIRL_T", "d v_2 / d x_1 (family B)", "-k*Tstar^(2*a)", d(v2b, Symbol::x1));
  // e_z component of curl v, Cartesian right-hand rule.
  add("VORTICITY_B", "(curl v) . e_z (family B)", "k*r*(Tstar-t)^(2*a)",
      d(v2b, Symbol::x1) - d(v1b, Symbol::x2));
  const auto fa = CartesianClosedForms::family(Family::A);
  add("VORTICITY_A", "(curl v) . e_z (family A)", "0", d(P(fa.v2), Symbol::x1) - d(P(fa.v1), Symbol::x2));
  const Poly g11 = d(P(fa.v1), Symbol::x1);
  add("GRADIENT_A_11", "d v_1 / d x_1 (family A)", "a/(Tstar-t) - 2*k*x1*x2/(x1^2+x2^2)^2", g11);
  return out;
}

// --- certificate ---

struct Certificate {
  Family family;
  std::vector<SymbolicResidual> reduced;
  std::vector<SymbolicResidual> cartesian;
  std::vector<AnsatzSolution> ansatz;
  bool ansatz_ok = false;
  std::vector<Discrepancy> discrepancies;

  bool pass() const {
    const auto zero = [](const SymbolicResidual& r) { return r.is_zero; };
    return std::all_of(reduced.begin(), reduced.end(), zero) &&
           std::all_of(cartesian.begin(), cartesian.end(), zero) && ansatz_ok;
  }
};

inline Certificate certify(Family f, const AxisymClosedForms& axisym, const CartesianClosedForms& cart) {
  Certificate c{f, build_reduced_residuals(axisym), ns_cartesian_residual(cart, parse(cart.pressure)),
                ansatz_exponents(), false, printed_formula_checks()};
  c.ansatz_ok = ansatz_matches_expected(c.ansatz);
  return c;
}

inline Certificate certify(Family f) {
  return certify(f, AxisymClosedForms::family(f), CartesianClosedForms::family(f));
}

/// Line-oriented certificate text: one PASS/FAIL line per equation id,
/// the ansatz line, printed-versus-derived lines, and an overall verdict.
inline std::string certificate_text(const Certificate& c, std::string_view version) {
  std::ostringstream os;
  os << "# nsblowup " << version << " symbolic certificate family=" << nsblowup::to_string(c.family) << "\n";
  const auto line = [&](const SymbolicResidual& r) {
    os << to_string(r.equation_id) << (r.is_zero ? " PASS" : " FAIL");
    if (!r.is_zero) os << " residual=" << sym::to_string(r.expr);
    os << "\n";
  };
  os << "[reduced]\n";
  for (const auto& r : c.reduced) line(r);
  os << "[cartesian]\n";
  for (const auto& r : c.cartesian) line(r);
  os << "[ansatz]\nANSATZ_EXPONENTS " << (c.ansatz_ok ? "PASS" : "FAIL") << " {";
  for (std::size_t i = 0; i < c.ansatz.size(); ++i)
    os << (i ? ", " : "") << "(p=" << detail::rational_text(c.ansatz[i].p)
       << ", beta=" << sym::to_string(c.ansatz[i].beta) << ")";
  os << "}\n[printed-vs-derived]\n";
  for (const auto& d : c.discrepancies) {
    os << (d.mismatch ? "DISCREPANCY " : "AGREES ") << d.id << " quantity=\"" << d.quantity
       << "\" printed=" << sym::to_string(d.printed) << " derived=" << sym::to_string(d.derived) << "\n";
  }
  os << "NOTE ENERGY_IDENTITY printed dissipation term lacks the square; standard form is "
        "|v(t)|^2 + 2 nu int_0^t |grad v|^2 ds = |v(0)|^2 (infinite for both families)\n";
  os << "OVERALL " << (c.pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace nsblowup::sym
