#pragma once

// Immutable expression trees over the fixed symbol set of the blowup
// families. Nodes are shared; an Expr is a cheap value handle.

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "nsblowup/errors.hpp"

namespace nsblowup::sym {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Declaration order is the canonical monomial order.
enum class Symbol : std::uint8_t { a, k, nu, p, beta, Tstar, t, x1, x2, x3, r, z, tau };

inline constexpr std::size_t kSymbolCount = 13;

inline constexpr std::array<std::string_view, kSymbolCount> kSymbolNames = {
    "a", "k", "nu", "p", "beta", "Tstar", "t", "x1", "x2", "x3", "r", "z", "tau"};

inline std::string_view name(Symbol s) { return kSymbolNames[static_cast<std::size_t>(s)]; }

inline bool is_variable(Symbol s) {
  switch (s) {
    case Symbol::t:
    case Symbol::r:
    case Symbol::z:
    case Symbol::x1:
    case Symbol::x2:
    case Symbol::x3:
      return true;
    default:
      return false;
  }
}

inline bool is_parameter(Symbol s) { return !is_variable(s) && s != Symbol::tau; }

/// Parameters allowed inside symbolic exponents.
inline bool is_exponent_parameter(Symbol s) {
  return s == Symbol::a || s == Symbol::p || s == Symbol::beta;
}

/// Lookup used by the parser; `tau` is deliberately absent (it is spelled
/// `(Tstar - t)` in text).
inline std::optional<Symbol> symbol_from_name(std::string_view n) {
  for (std::size_t i = 0; i < kSymbolCount; ++i) {
    const auto s = static_cast<Symbol>(i);
    if (s != Symbol::tau && kSymbolNames[i] == n) return s;
  }
  return std::nullopt;
}

class Expr;

struct ConstNode {
  Rational value;
};
struct SymbolNode {
  Symbol symbol;
};
struct SumNode {
  std::vector<Expr> terms;
};
struct ProductNode {
  std::vector<Expr> factors;
};
struct PowerNode;
struct NegNode;

struct ExprNode;

class Expr {
 public:
  using Node = ExprNode;

  /// The zero expression: an empty sum.
  Expr();

  static Expr constant(Rational v);
  static Expr integer(long v) { return constant(Rational(v)); }
  static Expr symbol(Symbol s);
  static Expr tau() { return symbol(Symbol::tau); }
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(Expr base, Expr exponent);
  static Expr neg(Expr child);

  const Node& node() const { return *node_; }

  template <class T>
  const T* as() const;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct PowerNode {
  Expr base;
  Expr exponent;
};
struct NegNode {
  Expr child;
};

struct ExprNode : std::variant<ConstNode, SymbolNode, SumNode, ProductNode, PowerNode, NegNode> {
  using variant::variant;
};

template <class T>
const T* Expr::as() const {
  return std::get_if<T>(static_cast<const ExprNode::variant*>(node_.get()));
}

inline Expr::Expr() : node_(std::make_shared<const Node>(SumNode{})) {}
inline Expr Expr::constant(Rational v) {
  return Expr(std::make_shared<const Node>(ConstNode{std::move(v)}));
}
inline Expr Expr::symbol(Symbol s) { return Expr(std::make_shared<const Node>(SymbolNode{s})); }
inline Expr Expr::sum(std::vector<Expr> terms) {
  return Expr(std::make_shared<const Node>(SumNode{std::move(terms)}));
}
inline Expr Expr::product(std::vector<Expr> factors) {
  return Expr(std::make_shared<const Node>(ProductNode{std::move(factors)}));
}
inline Expr Expr::power(Expr base, Expr exponent) {
  return Expr(std::make_shared<const Node>(PowerNode{std::move(base), std::move(exponent)}));
}
inline Expr Expr::neg(Expr child) { return Expr(std::make_shared<const Node>(NegNode{std::move(child)})); }

// Tree-building operators. They do not simplify; see simplify().
inline Expr operator+(const Expr& x, const Expr& y) { return Expr::sum({x, y}); }
inline Expr operator-(const Expr& x, const Expr& y) { return Expr::sum({x, Expr::neg(y)}); }
inline Expr operator-(const Expr& x) { return Expr::neg(x); }
inline Expr operator*(const Expr& x, const Expr& y) { return Expr::product({x, y}); }
inline Expr operator/(const Expr& x, const Expr& y) {
  return Expr::product({x, Expr::power(y, Expr::integer(-1))});
}
inline Expr pow(const Expr& x, const Expr& e) { return Expr::power(x, e); }
inline Expr pow(const Expr& x, long n) { return Expr::power(x, Expr::integer(n)); }

/// Structural (tree) equality. Use sym::equivalent for mathematical equality.
inline bool structurally_equal(const Expr& x, const Expr& y) {
  if (x.node().index() != y.node().index()) return false;
  if (auto c = x.as<ConstNode>()) return c->value == y.as<ConstNode>()->value;
  if (auto s = x.as<SymbolNode>()) return s->symbol == y.as<SymbolNode>()->symbol;
  auto same_list = [](const std::vector<Expr>& u, const std::vector<Expr>& v) {
    if (u.size() != v.size()) return false;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (!structurally_equal(u[i], v[i])) return false;
    return true;
  };
  if (auto s = x.as<SumNode>()) return same_list(s->terms, y.as<SumNode>()->terms);
  if (auto p = x.as<ProductNode>()) return same_list(p->factors, y.as<ProductNode>()->factors);
  if (auto p = x.as<PowerNode>()) {
    const auto* q = y.as<PowerNode>();
    return structurally_equal(p->base, q->base) && structurally_equal(p->exponent, q->exponent);
  }
  return structurally_equal(x.as<NegNode>()->child, y.as<NegNode>()->child);
}

inline bool is_zero_literal(const Expr& e) {
  if (auto s = e.as<SumNode>()) return s->terms.empty();
  if (auto c = e.as<ConstNode>()) return c->value == 0;
  return false;
}

namespace detail {

inline std::string rational_text(const Rational& v) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(v);
  if (boost::multiprecision::denominator(v) != 1) os << '/' << boost::multiprecision::denominator(v);
  return os.str();
}

// Precedence levels for parenthesization: sum < product < unary < power < atom.
enum class Prec { Sum = 0, Product = 1, Unary = 2, Power = 3, Atom = 4 };

inline Prec precedence(const Expr& e) {
  if (auto c = e.as<ConstNode>()) {
    if (c->value < 0) return Prec::Unary;
    if (boost::multiprecision::denominator(c->value) != 1) return Prec::Product;
    return Prec::Atom;
  }
  if (auto s = e.as<SymbolNode>()) return s->symbol == Symbol::tau ? Prec::Atom : Prec::Atom;
  if (auto s = e.as<SumNode>()) return s->terms.size() <= 1 ? (s->terms.empty() ? Prec::Atom : precedence(s->terms[0])) : Prec::Sum;
  if (auto p = e.as<ProductNode>()) return p->factors.size() == 1 ? precedence(p->factors[0]) : Prec::Product;
  if (e.as<PowerNode>()) return Prec::Power;
  return Prec::Unary;
}

std::string print(const Expr& e);

inline std::string wrap(const Expr& e, Prec min) {
  std::string s = print(e);
  return precedence(e) < min ? "(" + s + ")" : s;
}

/// True when a printed term starts with a minus sign that a sum can absorb.
inline bool leading_minus(const std::string& s) { return !s.empty() && s[0] == '-'; }

inline std::string print(const Expr& e) {
  if (auto c = e.as<ConstNode>()) return rational_text(c->value);
  if (auto s = e.as<SymbolNode>()) return s->symbol == Symbol::tau ? "(Tstar-t)" : std::string(name(s->symbol));
  if (auto s = e.as<SumNode>()) {
    if (s->terms.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < s->terms.size(); ++i) {
      std::string term = wrap(s->terms[i], Prec::Product);
      if (i == 0) {
        out = term;
      } else if (leading_minus(term)) {
        out += " - " + term.substr(1);
      } else {
        out += " + " + term;
      }
    }
    return out;
  }
  if (auto p = e.as<ProductNode>()) {
    if (p->factors.empty()) return "1";
    std::string out;
    std::size_t start = 0;
    // A leading -1 prints as a sign; a leading negative constant keeps its sign.
    if (auto c = p->factors[0].as<ConstNode>(); c && p->factors.size() > 1) {
      if (c->value == -1) {
        out = "-";
        start = 1;
      } else if (c->value == 1) {
        start = 1;
      } else if (c->value < 0) {
        out = "-" + rational_text(-c->value) + "*";
        start = 1;
      }
    }
    for (std::size_t i = start; i < p->factors.size(); ++i) {
      // Rational constants print as "n/d" which binds as a product; keep
      // them first or parenthesize elsewhere.
      const auto& f = p->factors[i];
      std::string fs;
      if (auto c = f.as<ConstNode>(); c && boost::multiprecision::denominator(c->value) != 1 && i > start)
        fs = "(" + rational_text(c->value) + ")";
      else
        fs = wrap(f, Prec::Unary);
      if (precedence(f) == Prec::Unary && i > start) fs = "(" + print(f) + ")";
      out += (i > start ? "*" : "") + fs;
    }
    return out;
  }
  if (auto p = e.as<PowerNode>()) {
    std::string base = wrap(p->base, Prec::Atom);
    std::string exponent = print(p->exponent);
    if (precedence(p->exponent) != Prec::Atom) exponent = "(" + exponent + ")";
    return base + "^" + exponent;
  }
  return "-" + wrap(e.as<NegNode>()->child, Prec::Power);
}

inline std::string describe(const Expr& e) {
  if (auto c = e.as<ConstNode>()) return "Const(" + rational_text(c->value) + ")";
  if (auto s = e.as<SymbolNode>()) {
    if (s->symbol == Symbol::tau) return "Tau";
    return std::string(is_variable(s->symbol) ? "Var " : "Param ") + std::string(name(s->symbol));
  }
  auto list = [](std::string head, const std::vector<Expr>& xs) {
    head += "(";
    for (std::size_t i = 0; i < xs.size(); ++i) head += (i ? ", " : "") + describe(xs[i]);
    return head + ")";
  };
  if (auto s = e.as<SumNode>()) return list("Sum", s->terms);
  if (auto p = e.as<ProductNode>()) return list("Product", p->factors);
  if (auto p = e.as<PowerNode>()) {
    std::string exponent;
    if (auto c = p->exponent.as<ConstNode>())
      exponent = rational_text(c->value);
    else
      exponent = describe(p->exponent);
    return "Power(" + describe(p->base) + ", " + exponent + ")";
  }
  return "Neg(" + describe(e.as<NegNode>()->child) + ")";
}

}  // namespace detail

/// Text form accepted back by parse(); tau prints as (Tstar-t).
inline std::string to_string(const Expr& e) { return detail::print(e); }

/// Tree-shape description, e.g. "Product(Param a, Var r, Power(Tau, -1))".
inline std::string describe(const Expr& e) { return detail::describe(e); }

}  // namespace nsblowup::sym
