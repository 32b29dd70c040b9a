#pragma once

// Differentials of translations, quasi-invariant frames, structure functions
// and the canonical Ad-form. Everything is templated on the scalar so that
// derivatives of these objects are available by adding one more dual layer.

#include <functional>
#include <string>

#include "loopbundle/core.hpp"

namespace loopbundle {

/// C(p, i, j) = C^p_ij.
template <class T>
struct Tensor3 {
  std::size_t n = 0;
  std::vector<T> data;

  Tensor3() = default;
  explicit Tensor3(std::size_t n_) : n(n_), data(n_ * n_ * n_, T(0.0)) {}
  T& operator()(std::size_t p, std::size_t i, std::size_t j) { return data[(p * n + i) * n + j]; }
  const T& operator()(std::size_t p, std::size_t i, std::size_t j) const { return data[(p * n + i) * n + j]; }
};

enum class FrameSide {
  left,   // Γ_i = ∂(a·b)/∂b^i at b = e (left quasi-invariant fields)
  right,  // L̄_i = ∂(a·y)/∂a^i at a = e (right quasi-invariant fields)
};

/// Frames with condition number above this trigger the warning handler.
inline constexpr double kFrameConditionWarn = 1e8;

/// Receives conditioning warnings; defaults to stderr. Pass an empty function
/// to silence.
void set_warning_handler(std::function<void(const std::string&)> handler);
void emit_warning(const std::string& message);

/// J_{L_a}(b): Jacobian of b ↦ a·b at b.
template <class T>
Mat<T> left_translation_jacobian(const Loop& L, const Vec<T>& a, const Vec<T>& b) {
  return jacobian([&]<class S>(const Vec<S>& x) { return L.product(lift_vec<S>(a), x); }, b);
}

/// J_{R_b}(a): Jacobian of a ↦ a·b at a.
template <class T>
Mat<T> right_translation_jacobian(const Loop& L, const Vec<T>& b, const Vec<T>& a) {
  return jacobian([&]<class S>(const Vec<S>& x) { return L.product(x, lift_vec<S>(b)); }, a);
}

/// L_{a*} applied to v at base point b.
template <class T>
Vec<T> pushforward_left(const Loop& L, const Vec<T>& a, const Vec<T>& b, const Vec<T>& v) {
  return directional([&]<class S>(const Vec<S>& x) { return L.product(lift_vec<S>(a), x); }, b, v);
}

/// Left frame R(a): column i is L_{a*} e_i.
template <class T>
Mat<T> left_frame(const Loop& L, const Vec<T>& a) {
  return left_translation_jacobian(L, a, lift_vec<T>(L.identity()));
}

/// Right frame R̄(y): column i is R_{y*} e_i.
template <class T>
Mat<T> right_frame(const Loop& L, const Vec<T>& y) {
  return right_translation_jacobian(L, y, lift_vec<T>(L.identity()));
}

template <class T>
Mat<T> frame(const Loop& L, FrameSide side, const Vec<T>& a) {
  return side == FrameSide::left ? left_frame(L, a) : right_frame(L, a);
}

/// Inverse of a frame, with SingularFrame on failure and a warning when the
/// frame is badly conditioned.
template <class T>
Mat<T> inverse_frame(const Mat<T>& R) {
  Mat<double> R0 = primal_mat(R);
  LU<double> lu0(R0);
  if (lu0.singular()) throw LoopError(ErrorKind::SingularFrame, "frame is not invertible");
  double cond = condition_number(R0);
  if (cond > kFrameConditionWarn) emit_warning("frame condition number " + std::to_string(cond));
  return inverse(R);
}

/// Canonical Ad-form ω(V_a) = L⁻¹_{a*} V_a.
template <class T>
Vec<T> canonical_form(const Loop& L, const Vec<T>& a, const Vec<T>& v) {
  return inverse_frame(left_frame(L, a)) * v;
}

/// Lie bracket of frame columns, expressed back in the frame:
/// [X_i, X_j] = C^p_ij X_p with X the left or right frame.
template <class T>
Tensor3<T> structure_functions(const Loop& L, const Vec<T>& a, FrameSide side = FrameSide::left) {
  using DT = Dual<T>;
  const std::size_t n = L.dim();
  Mat<T> R;
  std::vector<Mat<T>> dR(n);  // dR[m] = ∂_m R
  for (std::size_t m = 0; m < n; ++m) {
    Vec<DT> am(n);
    for (std::size_t i = 0; i < n; ++i) am[i] = DT(a[i], T(i == m ? 1.0 : 0.0));
    Mat<DT> F = frame(L, side, am);
    if (m == 0) R = value_part(F);
    dR[m] = derivative_part(F);
  }
  Mat<T> Rinv = inverse_frame(R);
  Tensor3<T> C(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Vec<T> br(n, T(0.0));
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t m = 0; m < n; ++m) br[k] += R(m, i) * dR[m](k, j) - R(m, j) * dR[m](k, i);
      Vec<T> c = Rinv * br;
      for (std::size_t p = 0; p < n; ++p) {
        C(p, i, j) = c[p];
        C(p, j, i) = -c[p];
      }
    }
  }
  return C;
}

/// Directional derivatives ∂_n C^p_ij at a, one tensor per coordinate n.
template <class T>
std::vector<Tensor3<T>> structure_function_derivatives(const Loop& L, const Vec<T>& a,
                                                       FrameSide side = FrameSide::left) {
  using DT = Dual<T>;
  const std::size_t n = L.dim();
  std::vector<Tensor3<T>> out;
  for (std::size_t m = 0; m < n; ++m) {
    Vec<DT> am(n);
    for (std::size_t i = 0; i < n; ++i) am[i] = DT(a[i], T(i == m ? 1.0 : 0.0));
    Tensor3<DT> Cd = structure_functions(L, am, side);
    Tensor3<T> d(n);
    for (std::size_t k = 0; k < Cd.data.size(); ++k) d.data[k] = Cd.data[k].d;
    out.push_back(std::move(d));
  }
  return out;
}

/// Max |C^p_ij,n R^n_k + cyc + C^l_ij C^p_kl + cyc| over all (p,i,j,k).
double jacobi_residual(const Loop& L, const Vec<double>& a);

struct AdFormResiduals {
  double left = 0.0;     // ω(L_{b*}v) vs l_(b,a)* ω(v)
  double right = 0.0;    // ω(R_{b*}v) vs Ad⁻¹_b(a)* ω(v)
  double adjoint = 0.0;  // L_{b*}X_a vs l̂_(b,a)* X_{b·a} for the fundamental field X
};

/// Differential at e of c ↦ associator(kind, a, b, c).
Mat<double> associator_differential(const Loop& L, AssociatorKind kind, const Vec<double>& a, const Vec<double>& b);
/// Differential at e of c ↦ Ad⁻¹_b(a)(c).
Mat<double> ad_inverse_differential(const Loop& L, const Vec<double>& b, const Vec<double>& a);
/// Differential at e of c ↦ Ad_b(a)(c).
Mat<double> ad_differential(const Loop& L, const Vec<double>& b, const Vec<double>& a);

AdFormResiduals verify_ad_form_laws(const Loop& L, const Vec<double>& b, const Vec<double>& a, const Vec<double>& v);

}  // namespace loopbundle
