#pragma once

// Rebuilding the loop product from infinitesimal data: the generalized Lie
// equation ∂φ/∂b = R(φ) l_(a,b)*,e R(b)⁻¹ integrated along a path from e to b,
// plus the generalized Maurer–Cartan residual and the transformation-
// quasigroup axioms for Q acting on itself.

#include "loopbundle/tangent.hpp"

namespace loopbundle {

enum class PathKind {
  ray,     // b(t) = t b
  bezier,  // quadratic, control point offset perpendicular to b (dim ≥ 2)
};

struct ReconstructOptions {
  int steps = 256;
  PathKind path = PathKind::ray;
  /// Richardson error estimate (steps vs 2·steps) above which StepUnderflow
  /// is raised. Non-positive disables the check.
  double tol = 1e-6;
};

struct ReconstructResult {
  Vec<double> value;      // φ(1) with `steps` steps
  double error_estimate;  // |φ_N − φ_2N| · 16/15
};

/// λ(b; a) = l_(a,b)*,e · R(b)⁻¹, templated so its b-derivatives are available.
template <class T>
Mat<T> maurer_cartan_lambda(const Loop& L, const Vec<double>& a, const Vec<T>& b) {
  Mat<T> lstar = jacobian([&]<class S>(const Vec<S>& c) {
    return associator(L, AssociatorKind::left, lift_vec<S>(a), lift_vec<S>(b), c);
  }, lift_vec<T>(L.identity()));
  return lstar * inverse_frame(left_frame(L, b));
}

/// RK4 integration of the generalized Lie equation from φ(0) = a.
Vec<double> integrate_lie_equation(const Loop& L, const Vec<double>& a, const Vec<double>& b, int steps,
                                   PathKind path = PathKind::ray);

/// φ(1) ≈ a·b. Raises StepUnderflow when steps < 16 or the Richardson
/// estimate exceeds opt.tol.
ReconstructResult reconstruct_product(const Loop& L, const Vec<double>& a, const Vec<double>& b,
                                      const ReconstructOptions& opt = {});

/// Max-norm of ∂_p λ^i_j − ∂_j λ^i_p + C^i_mn(a·b) λ^m_p λ^n_j.
double maurer_cartan_residual(const Loop& L, const Vec<double>& b, const Vec<double>& a);

/// Modified associativity φ(φ(a,b),c) = φ(a, φ̃(b,c;a)) with
/// φ̃(b,c;a) = L_b l⁻¹_(a,b) c, unit conditions and invertibility.
VerificationReport batalin_axiom_check(const Loop& L, const Vec<double>& a, const Vec<double>& b,
                                       const Vec<double>& c, double tol = 1e-10);

}  // namespace loopbundle
