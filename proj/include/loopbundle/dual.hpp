#pragma once

// Forward-mode dual numbers. Dual<T> carries a value and one directional
// derivative; nesting Dual<Dual<double>> gives mixed second derivatives, and
// so on. All loop maps are templated on the scalar so any of these types can
// be pushed through them.

#include <cmath>
#include <type_traits>

namespace loopbundle {

template <class T>
struct Dual {
  T v{};  // value
  T d{};  // derivative part

  constexpr Dual() = default;
  template <class S>
    requires std::is_arithmetic_v<S>
  constexpr Dual(S s) : v(s), d(0) {}  // NOLINT(google-explicit-constructor)
  constexpr Dual(T value, T deriv) : v(value), d(deriv) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { *this = *this * o; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
  friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
  friend Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    T inv = T(1) / b.v;
    T q = a.v * inv;
    return {q, (a.d - q * b.d) * inv};
  }

  template <class S>
    requires std::is_arithmetic_v<S>
  friend Dual operator*(const Dual& a, S s) { return {a.v * s, a.d * s}; }
  template <class S>
    requires std::is_arithmetic_v<S>
  friend Dual operator*(S s, const Dual& a) { return {a.v * s, a.d * s}; }
  template <class S>
    requires std::is_arithmetic_v<S>
  friend Dual operator/(const Dual& a, S s) { return {a.v / s, a.d / s}; }
  template <class S>
    requires std::is_arithmetic_v<S>
  friend Dual operator+(const Dual& a, S s) { return {a.v + s, a.d}; }
  template <class S>
    requires std::is_arithmetic_v<S>
  friend Dual operator+(S s, const Dual& a) { return {a.v + s, a.d}; }
  template <class S>
    requires std::is_arithmetic_v<S>
  friend Dual operator-(const Dual& a, S s) { return {a.v - s, a.d}; }
  template <class S>
    requires std::is_arithmetic_v<S>
  friend Dual operator-(S s, const Dual& a) { return {s - a.v, -a.d}; }
  template <class S>
    requires std::is_arithmetic_v<S>
  friend Dual operator/(S s, const Dual& a) { return Dual(s) / a; }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;
using D4 = Dual<D3>;

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};
template <class T>
inline constexpr bool is_dual_v = is_dual<T>::value;

template <class T>
struct dual_depth : std::integral_constant<int, 0> {};
template <class T>
struct dual_depth<Dual<T>> : std::integral_constant<int, 1 + dual_depth<T>::value> {};
template <class T>
inline constexpr int dual_depth_v = dual_depth<T>::value;

/// Innermost value of a (possibly nested) dual number.
inline double primal(double x) { return x; }
template <class T>
double primal(const Dual<T>& x) {
  return primal(x.v);
}

/// Convert a double (or shallower scalar) to scalar type T with zero derivatives.
template <class T, class U>
T lift(const U& u) {
  if constexpr (std::is_same_v<T, U>) {
    return u;
  } else if constexpr (std::is_arithmetic_v<U>) {
    return T(u);
  } else {
    using Inner = decltype(T{}.v);
    return T(lift<Inner>(u), Inner(0.0));
  }
}

using std::cos;
using std::sin;
using std::sqrt;
using std::exp;
using std::atan2;
using std::floor;
using std::tan;
using std::tanh;
using std::atan;
using std::log;

template <class T>
Dual<T> sin(const Dual<T>& x) { return {sin(x.v), x.d * cos(x.v)}; }
template <class T>
Dual<T> cos(const Dual<T>& x) { return {cos(x.v), -(x.d * sin(x.v))}; }
template <class T>
Dual<T> exp(const Dual<T>& x) {
  T e = exp(x.v);
  return {e, x.d * e};
}
template <class T>
Dual<T> log(const Dual<T>& x) { return {log(x.v), x.d / x.v}; }
template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  T s = sqrt(x.v);
  return {s, x.d / (2.0 * s)};
}
template <class T>
Dual<T> tan(const Dual<T>& x) {
  T t = tan(x.v);
  return {t, x.d * (1.0 + t * t)};
}
template <class T>
Dual<T> tanh(const Dual<T>& x) {
  T t = tanh(x.v);
  return {t, x.d * (1.0 - t * t)};
}
template <class T>
Dual<T> atan(const Dual<T>& x) { return {atan(x.v), x.d / (1.0 + x.v * x.v)}; }
template <class T>
Dual<T> atan2(const Dual<T>& y, const Dual<T>& x) {
  T r2 = x.v * x.v + y.v * y.v;
  return {atan2(y.v, x.v), (x.v * y.d - y.v * x.d) / r2};
}
// Piecewise constant; derivative vanishes almost everywhere.
template <class T>
Dual<T> floor(const Dual<T>& x) { return Dual<T>(floor(x.v), T(0)); }

}  // namespace loopbundle
