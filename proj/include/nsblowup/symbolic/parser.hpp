#pragma once

// Grammar (whitespace ignored):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right-associative via unary
//   primary := number | identifier | '(' expr ')'
// Numbers are decimal literals converted exactly to rationals. A
// parenthesised group equal to Tstar - t becomes the tau symbol. The
// Unicode minus sign U+2212 is accepted as '-'.

#include <cctype>
#include <string>
#include <string_view>

#include "nsblowup/symbolic/poly.hpp"

namespace nsblowup::sym {

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_space();
    if (pos_ != text_.size()) throw SyntaxError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  /// Matches `c`, or U+2212 when c == '-'.
  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    if (c == '-' && text_.substr(pos_, 3) == "\xE2\x88\x92") {
      pos_ += 3;
      return true;
    }
    return false;
  }

  Expr parse_sum() {
    std::vector<Expr> terms{parse_product()};
    for (;;) {
      if (accept('+'))
        terms.push_back(parse_product());
      else if (accept('-'))
        terms.push_back(Expr::neg(parse_product()));
      else
        break;
    }
    if (terms.size() == 1) return terms.front();
    return Expr::sum(std::move(terms));
  }

  Expr parse_product() {
    std::vector<Expr> factors{parse_unary()};
    for (;;) {
      if (accept('*'))
        factors.push_back(parse_unary());
      else if (accept('/'))
        factors.push_back(Expr::power(parse_unary(), Expr::integer(-1)));
      else
        break;
    }
    if (factors.size() == 1) return factors.front();
    return Expr::product(std::move(factors));
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::neg(parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return Expr::power(std::move(base), parse_unary());
    return base;
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_sum();
      if (!accept(')')) throw SyntaxError("expected ')'", pos_);
      return as_tau(std::move(inner));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw SyntaxError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    Integer digits = 0;
    Integer scale = 1;
    bool seen_digit = false;
    bool seen_point = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits = digits * 10 + (c - '0');
        if (seen_point) scale *= 10;
        seen_digit = true;
      } else if (c == '.' && !seen_point) {
        seen_point = true;
      } else {
        break;
      }
      ++pos_;
    }
    if (!seen_digit) throw SyntaxError("malformed number", start);
    return Expr::constant(Rational(digits, scale));
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view id = text_.substr(start, pos_ - start);
    auto s = symbol_from_name(id);
    if (!s) throw UnknownIdentifier(std::string(id), start);
    return Expr::symbol(*s);
  }

  static Expr as_tau(Expr e) {
    auto s = e.as<SumNode>();
    if (!s || s->terms.size() != 2) return e;
    try {
      if (to_poly(e).is_tau_binomial()) return Expr::tau();
    } catch (const ExponentNotSupported&) {
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse(std::string_view text) { return detail::Parser(text).parse(); }

}  // namespace nsblowup::sym
