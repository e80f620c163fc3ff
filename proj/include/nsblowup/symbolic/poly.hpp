#pragma once

// Rational normal form: a finite sum of monomials c * prod_s s^{e_s} with
// exact rational c and exponents affine in {a, p, beta}. Two identities are
// built into the form:
//   * r^2 = x1^2 + x2^2, applied by rewriting x2^n (n >= 2) as
//     x2^{n-2} (r^2 - x1^2); the remainder x1^i x2^{0|1} r^m is unique.
//   * tau is a symbol of its own; the binomial Tstar - t is recognised as
//     tau when it appears as the base of a power.
// The zero polynomial is the empty map.

#include <cmath>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "nsblowup/symbolic/expr.hpp"

namespace nsblowup::sym {

/// c + ca*a + cp*p + cb*beta.
struct Exponent {
  Rational c = 0;
  Rational ca = 0;
  Rational cp = 0;
  Rational cb = 0;

  static Exponent constant(Rational v) { return {std::move(v), 0, 0, 0}; }

  bool is_zero() const { return c == 0 && is_constant(); }
  bool is_constant() const { return ca == 0 && cp == 0 && cb == 0; }
  bool is_integer() const { return is_constant() && boost::multiprecision::denominator(c) == 1; }

  /// Coefficient of an exponent parameter.
  Rational& coeff(Symbol s) {
    if (s == Symbol::a) return ca;
    if (s == Symbol::p) return cp;
    return cb;
  }
  const Rational& coeff(Symbol s) const { return const_cast<Exponent*>(this)->coeff(s); }

  friend Exponent operator+(const Exponent& x, const Exponent& y) {
    return {x.c + y.c, x.ca + y.ca, x.cp + y.cp, x.cb + y.cb};
  }
  friend Exponent operator-(const Exponent& x, const Exponent& y) {
    return {x.c - y.c, x.ca - y.ca, x.cp - y.cp, x.cb - y.cb};
  }
  friend Exponent operator*(const Exponent& x, const Rational& s) {
    return {x.c * s, x.ca * s, x.cp * s, x.cb * s};
  }
  friend bool operator==(const Exponent& x, const Exponent& y) {
    return x.c == y.c && x.ca == y.ca && x.cp == y.cp && x.cb == y.cb;
  }
  /// Numeric part first, then the symbolic coefficients.
  friend bool operator<(const Exponent& x, const Exponent& y) {
    return std::tie(x.c, x.ca, x.cp, x.cb) < std::tie(y.c, y.ca, y.cp, y.cb);
  }
};

/// Product of two affine exponents; defined only when one side is constant.
inline Exponent multiply(const Exponent& x, const Exponent& y) {
  if (x.is_constant()) return y * x.c;
  if (y.is_constant()) return x * y.c;
  throw ExponentNotSupported("product of two symbolic exponents is not affine");
}

/// Sparse symbol -> exponent map; zero exponents are never stored.
using Monomial = std::map<Symbol, Exponent>;

inline void multiply_into(Monomial& m, Symbol s, const Exponent& e) {
  auto [it, inserted] = m.try_emplace(s, e);
  if (!inserted) it->second = it->second + e;
  if (it->second.is_zero()) m.erase(it);
}

inline Monomial multiply(Monomial x, const Monomial& y) {
  for (const auto& [s, e] : y) multiply_into(x, s, e);
  return x;
}

inline Rational rational_pow(const Rational& base, long n) {
  Rational out = 1;
  Rational b = n >= 0 ? base : Rational(1) / base;
  for (long i = 0, m = std::labs(n); i < m; ++i) out *= b;
  return out;
}

class Poly {
 public:
  using Terms = std::map<Monomial, Rational>;

  Poly() = default;

  static Poly constant(const Rational& c) {
    Poly out;
    out.add_term({}, c);
    return out;
  }
  static Poly monomial(Monomial m, const Rational& c = 1) {
    Poly out;
    out.add_term(std::move(m), c);
    out.reduce();
    return out;
  }
  static Poly symbol(Symbol s, Exponent e = Exponent::constant(1)) {
    return monomial(Monomial{{s, std::move(e)}});
  }
  /// The polynomial c + ca*a + cp*p + cb*beta.
  static Poly from_exponent(const Exponent& e) {
    Poly out = constant(e.c);
    out.add_term({{Symbol::a, Exponent::constant(1)}}, e.ca);
    out.add_term({{Symbol::p, Exponent::constant(1)}}, e.cp);
    out.add_term({{Symbol::beta, Exponent::constant(1)}}, e.cb);
    return out;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Adds c*m without reduction; zero coefficients vanish.
  void add_term(Monomial m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(std::move(m), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Constant value if the polynomial has no symbols.
  std::optional<Rational> as_constant() const {
    if (terms_.empty()) return Rational(0);
    if (terms_.size() == 1 && terms_.begin()->first.empty()) return terms_.begin()->second;
    return std::nullopt;
  }

  /// True for exactly Tstar - t.
  bool is_tau_binomial() const {
    if (terms_.size() != 2) return false;
    const Monomial ts{{Symbol::Tstar, Exponent::constant(1)}};
    const Monomial tt{{Symbol::t, Exponent::constant(1)}};
    auto a = terms_.find(ts);
    auto b = terms_.find(tt);
    return a != terms_.end() && b != terms_.end() && a->second == 1 && b->second == -1;
  }

  friend Poly operator+(Poly x, const Poly& y) {
    for (const auto& [m, c] : y.terms_) x.add_term(m, c);
    return x;
  }
  friend Poly operator-(const Poly& x) {
    Poly out;
    for (const auto& [m, c] : x.terms_) out.terms_.emplace(m, -c);
    return out;
  }
  friend Poly operator-(const Poly& x, const Poly& y) { return x + (-y); }
  friend Poly operator*(const Poly& x, const Poly& y) {
    Poly out;
    for (const auto& [mx, cx] : x.terms_)
      for (const auto& [my, cy] : y.terms_) out.add_term(multiply(mx, my), cx * cy);
    out.reduce();
    return out;
  }
  friend Poly operator*(const Rational& s, const Poly& x) {
    if (s == 0) return {};
    Poly out;
    for (const auto& [m, c] : x.terms_) out.terms_.emplace(m, s * c);
    return out;
  }
  friend bool operator==(const Poly& x, const Poly& y) { return x.terms_ == y.terms_; }

 private:
  /// Rewrites x2^n, n >= 2 integer, using x2^2 = r^2 - x1^2 until stable.
  void reduce() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto it = terms_.begin(); it != terms_.end(); ++it) {
        auto x2 = it->first.find(Symbol::x2);
        if (x2 == it->first.end() || !x2->second.is_integer() || x2->second.c < 2) continue;
        Monomial base = it->first;
        const Rational c = it->second;
        multiply_into(base, Symbol::x2, Exponent::constant(-2));
        terms_.erase(it);
        Monomial with_r = base;
        multiply_into(with_r, Symbol::r, Exponent::constant(2));
        Monomial with_x1 = base;
        multiply_into(with_x1, Symbol::x1, Exponent::constant(2));
        add_term(std::move(with_r), c);
        add_term(std::move(with_x1), -c);
        changed = true;
        break;
      }
    }
  }

  friend Poly pow(const Poly& base, const Exponent& e);
  Terms terms_;
};

/// base^e. Multi-term bases need a positive integer exponent, except the
/// binomial Tstar - t which is rewritten as tau.
inline Poly pow(const Poly& base, const Exponent& e) {
  if (e.is_zero()) return Poly::constant(1);
  if (base.is_zero()) {
    if (e.is_constant() && e.c > 0) return {};
    throw ExponentNotSupported("zero raised to a non-positive or symbolic power");
  }
  if (base.is_tau_binomial()) return Poly::symbol(Symbol::tau, e);
  if (base.size() == 1) {
    const auto& [m, c] = *base.terms_.begin();
    Rational coeff = 1;
    if (e.is_integer()) {
      coeff = rational_pow(c, e.c.convert_to<long>());
    } else if (c != 1) {
      throw ExponentNotSupported("non-unit coefficient raised to a non-integer power");
    }
    Monomial out;
    for (const auto& [s, se] : m) multiply_into(out, s, multiply(se, e));
    return Poly::monomial(std::move(out), coeff);
  }
  if (e.is_integer() && e.c > 0) {
    Poly out = Poly::constant(1);
    for (long i = 0, n = e.c.convert_to<long>(); i < n; ++i) out = out * base;
    return out;
  }
  throw ExponentNotSupported("multi-term base raised to a negative or symbolic power");
}

/// Interprets a polynomial as an affine exponent in {a, p, beta}.
inline Exponent to_exponent(const Poly& poly) {
  Exponent e;
  for (const auto& [m, c] : poly.terms()) {
    if (m.empty()) {
      e.c += c;
      continue;
    }
    if (m.size() == 1) {
      const auto& [s, se] = *m.begin();
      if (is_exponent_parameter(s) && se == Exponent::constant(1)) {
        e.coeff(s) += c;
        continue;
      }
    }
    throw ExponentNotSupported("exponents must be affine in {a, p, beta}");
  }
  return e;
}

// --- Expr <-> Poly ---

inline Poly to_poly(const Expr& e) {
  if (auto c = e.as<ConstNode>()) return Poly::constant(c->value);
  if (auto s = e.as<SymbolNode>()) return Poly::symbol(s->symbol);
  if (auto s = e.as<SumNode>()) {
    Poly out;
    for (const auto& term : s->terms) out = out + to_poly(term);
    return out;
  }
  if (auto p = e.as<ProductNode>()) {
    Poly out = Poly::constant(1);
    for (const auto& f : p->factors) out = out * to_poly(f);
    return out;
  }
  if (auto p = e.as<PowerNode>()) return pow(to_poly(p->base), to_exponent(to_poly(p->exponent)));
  return -to_poly(e.as<NegNode>()->child);
}

inline Expr exponent_expr(const Exponent& e) {
  std::vector<Expr> terms;
  if (e.c != 0) terms.push_back(Expr::constant(e.c));
  for (Symbol s : {Symbol::a, Symbol::p, Symbol::beta}) {
    const Rational& c = e.coeff(s);
    if (c == 0) continue;
    if (c == 1)
      terms.push_back(Expr::symbol(s));
    else
      terms.push_back(Expr::product({Expr::constant(c), Expr::symbol(s)}));
  }
  if (terms.size() == 1) return terms.front();
  return Expr::sum(std::move(terms));
}

/// Normal-form expression: Sum of Products of (coefficient, powers).
inline Expr from_poly(const Poly& poly) {
  std::vector<Expr> terms;
  for (const auto& [m, c] : poly.terms()) {
    std::vector<Expr> factors;
    if (c != 1 || m.empty()) factors.push_back(Expr::constant(c));
    for (const auto& [s, e] : m) {
      if (e == Exponent::constant(1))
        factors.push_back(Expr::symbol(s));
      else
        factors.push_back(Expr::power(Expr::symbol(s), exponent_expr(e)));
    }
    terms.push_back(factors.size() == 1 ? factors.front() : Expr::product(std::move(factors)));
  }
  return Expr::sum(std::move(terms));
}

// --- evaluation ---

/// Numeric values for symbols. tau defaults to Tstar - t when unbound.
class Bindings {
 public:
  Bindings& set(Symbol s, double v) {
    values_[static_cast<std::size_t>(s)] = v;
    bound_[static_cast<std::size_t>(s)] = true;
    return *this;
  }
  bool has(Symbol s) const { return bound_[static_cast<std::size_t>(s)]; }
  double get(Symbol s) const {
    if (s == Symbol::tau && !has(s)) return get(Symbol::Tstar) - get(Symbol::t);
    if (!has(s)) throw Error("unbound symbol '" + std::string(name(s)) + "'");
    return values_[static_cast<std::size_t>(s)];
  }

 private:
  std::array<double, kSymbolCount> values_{};
  std::array<bool, kSymbolCount> bound_{};
};

inline double eval_exponent(const Exponent& e, const Bindings& b) {
  double v = e.c.convert_to<double>();
  for (Symbol s : {Symbol::a, Symbol::p, Symbol::beta})
    if (e.coeff(s) != 0) v += e.coeff(s).convert_to<double>() * b.get(s);
  return v;
}

inline double eval(const Poly& poly, const Bindings& b) {
  double sum = 0.0;
  for (const auto& [m, c] : poly.terms()) {
    double term = c.convert_to<double>();
    for (const auto& [s, e] : m) {
      if (e.is_integer()) {
        const long n = e.c.convert_to<long>();
        term *= std::pow(b.get(s), static_cast<double>(n));
      } else {
        term *= std::pow(b.get(s), eval_exponent(e, b));
      }
    }
    sum += term;
  }
  return sum;
}

inline double eval(const Expr& e, const Bindings& b) {
  if (auto c = e.as<ConstNode>()) return c->value.convert_to<double>();
  if (auto s = e.as<SymbolNode>()) return b.get(s->symbol);
  if (auto s = e.as<SumNode>()) {
    double v = 0.0;
    for (const auto& term : s->terms) v += eval(term, b);
    return v;
  }
  if (auto p = e.as<ProductNode>()) {
    double v = 1.0;
    for (const auto& f : p->factors) v *= eval(f, b);
    return v;
  }
  if (auto p = e.as<PowerNode>()) return std::pow(eval(p->base, b), eval(p->exponent, b));
  return -eval(e.as<NegNode>()->child, b);
}

// --- substitution ---

/// Replaces the parameter `s` by `value`. Occurrences inside exponents
/// require `value` to be affine in {a, p, beta}.
inline Poly substitute(const Poly& poly, Symbol s, const Poly& value) {
  if (!is_parameter(s)) throw Error("only parameters can be substituted");
  std::optional<Exponent> value_exponent;
  auto exponent_of_value = [&]() -> const Exponent& {
    if (!value_exponent) value_exponent = to_exponent(value);
    return *value_exponent;
  };
  Poly out;
  for (const auto& [m, c] : poly.terms()) {
    Monomial rest;
    Poly factor = Poly::constant(c);
    for (const auto& [sym, e] : m) {
      Exponent ne = e;
      if (is_exponent_parameter(s) && e.coeff(s) != 0) {
        const Rational k = e.coeff(s);
        ne.coeff(s) = 0;
        ne = ne + exponent_of_value() * k;
      }
      if (sym == s) {
        factor = factor * pow(value, ne);
      } else if (!ne.is_zero()) {
        rest.emplace(sym, ne);
      }
    }
    out = out + factor * Poly::monomial(std::move(rest));
  }
  return out;
}

inline Poly substitute(const Poly& poly, Symbol s, const Rational& value) {
  return substitute(poly, s, Poly::constant(value));
}

}  // namespace nsblowup::sym
