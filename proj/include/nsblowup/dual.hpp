#pragma once

#include <cmath>

namespace nsblowup {

/// Forward-mode dual number carrying one directional derivative. Used to
/// differentiate the closed-form fields exactly (to rounding) without
/// hand-written derivative formulas.
template <class T>
struct Dual {
  T val{};
  T der{};

  constexpr Dual() = default;
  constexpr Dual(T v) : val(v) {}  // NOLINT: implicit lift of constants
  constexpr Dual(T v, T d) : val(v), der(d) {}

  static constexpr Dual variable(T v) { return {v, T(1)}; }
};

template <class T>
constexpr Dual<T> operator+(Dual<T> x, Dual<T> y) { return {x.val + y.val, x.der + y.der}; }
template <class T>
constexpr Dual<T> operator-(Dual<T> x, Dual<T> y) { return {x.val - y.val, x.der - y.der}; }
template <class T>
constexpr Dual<T> operator-(Dual<T> x) { return {-x.val, -x.der}; }
template <class T>
constexpr Dual<T> operator*(Dual<T> x, Dual<T> y) {
  return {x.val * y.val, x.der * y.val + x.val * y.der};
}
template <class T>
constexpr Dual<T> operator/(Dual<T> x, Dual<T> y) {
  return {x.val / y.val, (x.der * y.val - x.val * y.der) / (y.val * y.val)};
}
template <class T>
constexpr Dual<T> operator*(T s, Dual<T> x) { return {s * x.val, s * x.der}; }
template <class T>
constexpr Dual<T> operator*(Dual<T> x, T s) { return {s * x.val, s * x.der}; }
template <class T>
constexpr Dual<T> operator/(Dual<T> x, T s) { return {x.val / s, x.der / s}; }
template <class T>
constexpr Dual<T> operator/(T s, Dual<T> x) { return Dual<T>(s) / x; }
template <class T>
constexpr Dual<T> operator+(T s, Dual<T> x) { return {s + x.val, x.der}; }
template <class T>
constexpr Dual<T> operator-(T s, Dual<T> x) { return {s - x.val, -x.der}; }

template <class T>
Dual<T> exp(Dual<T> x) {
  using std::exp;
  const T e = exp(x.val);
  return {e, e * x.der};
}

template <class T>
Dual<T> log(Dual<T> x) {
  using std::log;
  return {log(x.val), x.der / x.val};
}

template <class T>
T value_of(const T& x) { return x; }
template <class T>
T value_of(const Dual<T>& x) { return x.val; }

}  // namespace nsblowup
