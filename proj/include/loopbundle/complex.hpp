#pragma once

// Complex numbers and complexified quaternions over a generic scalar, so the
// loop products can be evaluated on nested dual numbers. std::complex is not
// usable with non-floating scalar types.

#include "loopbundle/dual.hpp"

namespace loopbundle {

template <class T>
struct Cplx {
  T re{};
  T im{};

  Cplx() = default;
  Cplx(T r, T i) : re(std::move(r)), im(std::move(i)) {}
  explicit Cplx(double r) : re(r), im(0.0) {}

  friend Cplx operator+(const Cplx& a, const Cplx& b) { return {a.re + b.re, a.im + b.im}; }
  friend Cplx operator-(const Cplx& a, const Cplx& b) { return {a.re - b.re, a.im - b.im}; }
  friend Cplx operator-(const Cplx& a) { return {-a.re, -a.im}; }
  friend Cplx operator*(const Cplx& a, const Cplx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cplx operator*(const Cplx& a, const T& s) { return {a.re * s, a.im * s}; }
  friend Cplx operator*(double s, const Cplx& a) { return {a.re * s, a.im * s}; }
  friend Cplx operator/(const Cplx& a, const Cplx& b) {
    T n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  friend Cplx operator/(const Cplx& a, const T& s) { return {a.re / s, a.im / s}; }
};

template <class T>
Cplx<T> conj(const Cplx<T>& z) {
  return {z.re, -z.im};
}
template <class T>
T norm2(const Cplx<T>& z) {
  return z.re * z.re + z.im * z.im;
}
template <class T>
T abs(const Cplx<T>& z) {
  return sqrt(norm2(z));
}
/// Modulus of the innermost value, used for singularity guards.
template <class T>
double primal_abs(const Cplx<T>& z) {
  double r = primal(z.re), i = primal(z.im);
  return std::sqrt(r * r + i * i);
}

/// Quaternion with complex coefficients: a0 + a1 i + a2 j + a3 k.
template <class T>
struct BiQuat {
  Cplx<T> c[4];

  friend BiQuat operator+(const BiQuat& a, const BiQuat& b) {
    BiQuat r;
    for (int k = 0; k < 4; ++k) r.c[k] = a.c[k] + b.c[k];
    return r;
  }
  friend BiQuat operator*(const BiQuat& a, const BiQuat& b) {
    const auto& p = a.c;
    const auto& q = b.c;
    BiQuat r;
    r.c[0] = p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3];
    r.c[1] = p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2];
    r.c[2] = p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1];
    r.c[3] = p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0];
    return r;
  }
  friend BiQuat operator*(const BiQuat& a, double s) {
    BiQuat r;
    for (int k = 0; k < 4; ++k) r.c[k] = s * a.c[k];
    return r;
  }
};

/// Quaternionic conjugation (complex coefficients are left alone).
template <class T>
BiQuat<T> qconj(const BiQuat<T>& q) {
  BiQuat<T> r;
  r.c[0] = q.c[0];
  for (int k = 1; k < 4; ++k) r.c[k] = -q.c[k];
  return r;
}

/// q q⁺, a complex scalar for complexified quaternions.
template <class T>
Cplx<T> qnorm(const BiQuat<T>& q) {
  return q.c[0] * q.c[0] + q.c[1] * q.c[1] + q.c[2] * q.c[2] + q.c[3] * q.c[3];
}

template <class T>
BiQuat<T> scalar_div(const BiQuat<T>& q, const Cplx<T>& s) {
  BiQuat<T> r;
  for (int k = 0; k < 4; ++k) r.c[k] = q.c[k] / s;
  return r;
}

}  // namespace loopbundle
