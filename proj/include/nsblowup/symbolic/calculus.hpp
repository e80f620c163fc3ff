#pragma once

#include "nsblowup/symbolic/parser.hpp"

namespace nsblowup::sym {

/// Rational normal form; zero is the empty Sum.
inline Expr simplify(const Expr& e) { return from_poly(to_poly(e)); }

inline bool is_zero(const Expr& e) { return to_poly(e).is_zero(); }

inline bool equivalent(const Expr& x, const Expr& y) { return (to_poly(x) - to_poly(y)).is_zero(); }

namespace detail {

/// d s / d var for a single symbol, as a polynomial (zero if independent).
/// r depends on x1, x2 through r^2 = x1^2 + x2^2; tau = Tstar - t.
inline Poly symbol_derivative(Symbol s, Symbol var) {
  if (s == var) return Poly::constant(1);
  if (s == Symbol::tau && var == Symbol::t) return Poly::constant(-1);
  if (s == Symbol::r && (var == Symbol::x1 || var == Symbol::x2))
    return Poly::monomial({{var, Exponent::constant(1)}, {Symbol::r, Exponent::constant(-1)}});
  return {};
}

}  // namespace detail

inline Poly differentiate(const Poly& poly, Symbol var) {
  if (!is_variable(var))
    throw Error("cannot differentiate with respect to parameter '" + std::string(name(var)) + "'");
  Poly out;
  for (const auto& [m, c] : poly.terms()) {
    for (const auto& [s, e] : m) {
      const Poly inner = detail::symbol_derivative(s, var);
      if (inner.is_zero()) continue;
      Monomial lowered = m;
      multiply_into(lowered, s, Exponent::constant(-1));
      out = out + (c * Poly::from_exponent(e)) * Poly::monomial(std::move(lowered)) * inner;
    }
  }
  return out;
}

inline Expr differentiate(const Expr& e, Symbol var) { return from_poly(differentiate(to_poly(e), var)); }

enum class CylOp { laplacian_minus_r2, laplacian_3r, d_r, d_z, d_t };

inline Poly cyl_operator(const Poly& f, CylOp op) {
  for (const auto& [m, c] : f.terms())
    for (Symbol s : {Symbol::x1, Symbol::x2, Symbol::x3})
      if (m.count(s)) throw Error("cylindrical operators act on functions of (t, r, z) only");
  const auto d = [](const Poly& g, Symbol v) { return differentiate(g, v); };
  const Poly inv_r = Poly::symbol(Symbol::r, Exponent::constant(-1));
  switch (op) {
    case CylOp::d_r:
      return d(f, Symbol::r);
    case CylOp::d_z:
      return d(f, Symbol::z);
    case CylOp::d_t:
      return d(f, Symbol::t);
    case CylOp::laplacian_minus_r2: {
      const Poly fr = d(f, Symbol::r);
      return d(fr, Symbol::r) + inv_r * fr + d(d(f, Symbol::z), Symbol::z) - inv_r * inv_r * f;
    }
    case CylOp::laplacian_3r: {
      const Poly fr = d(f, Symbol::r);
      return d(fr, Symbol::r) + Rational(3) * (inv_r * fr) + d(d(f, Symbol::z), Symbol::z);
    }
  }
  return {};
}

inline Expr cyl_operator(const Expr& e, CylOp op) { return from_poly(cyl_operator(to_poly(e), op)); }

}  // namespace nsblowup::sym
