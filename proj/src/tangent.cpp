#include "loopbundle/tangent.hpp"

#include <cstdio>
#include <mutex>

namespace loopbundle {

namespace {

std::mutex g_warn_mutex;
std::function<void(const std::string&)> g_warn = [](const std::string& m) {
  std::fprintf(stderr, "loopbundle warning: %s\n", m.c_str());
};

template <class F>
Mat<double> differential_at_identity(const Loop& L, F&& f) {
  return jacobian(std::forward<F>(f), L.identity());
}

}  // namespace

void set_warning_handler(std::function<void(const std::string&)> handler) {
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  g_warn = std::move(handler);
}

void emit_warning(const std::string& message) {
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  if (g_warn) g_warn(message);
}

double jacobi_residual(const Loop& L, const Vec<double>& a) {
  const std::size_t n = L.dim();
  Mat<double> R = left_frame(L, a);
  Tensor3<double> C = structure_functions(L, a);
  std::vector<Tensor3<double>> dC = structure_function_derivatives(L, a);

  // Γ_k(C^p_ij) = ∂_m C^p_ij R^m_k
  auto gamma_of_C = [&](std::size_t k, std::size_t p, std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t m = 0; m < n; ++m) s += dC[m](p, i, j) * R(m, k);
    return s;
  };
  auto quad = [&](std::size_t p, std::size_t i, std::size_t j, std::size_t k) {
    double s = 0.0;
    for (std::size_t l = 0; l < n; ++l) s += C(l, i, j) * C(p, k, l);
    return s;
  };
  double worst = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          double r = gamma_of_C(k, p, i, j) + gamma_of_C(i, p, j, k) + gamma_of_C(j, p, k, i) +
                     quad(p, i, j, k) + quad(p, j, k, i) + quad(p, k, i, j);
          worst = std::max(worst, std::abs(r));
        }
  return worst;
}

Mat<double> associator_differential(const Loop& L, AssociatorKind kind, const Vec<double>& a, const Vec<double>& b) {
  return differential_at_identity(L, [&]<class S>(const Vec<S>& c) {
    return associator(L, kind, lift_vec<S>(a), lift_vec<S>(b), c);
  });
}

Mat<double> ad_inverse_differential(const Loop& L, const Vec<double>& b, const Vec<double>& a) {
  return differential_at_identity(L, [&]<class S>(const Vec<S>& c) {
    return ad_map_inverse(L, lift_vec<S>(b), lift_vec<S>(a), c);
  });
}

Mat<double> ad_differential(const Loop& L, const Vec<double>& b, const Vec<double>& a) {
  return differential_at_identity(L, [&]<class S>(const Vec<S>& c) {
    return ad_map(L, lift_vec<S>(b), lift_vec<S>(a), c);
  });
}

AdFormResiduals verify_ad_form_laws(const Loop& L, const Vec<double>& b, const Vec<double>& a, const Vec<double>& v) {
  AdFormResiduals r;
  const Vec<double> w = canonical_form(L, a, v);  // ω(v)

  // Left law: ω at b·a of L_{b*} v.
  Vec<double> ba = L.product(b, a);
  Vec<double> lhs_left = canonical_form(L, ba, left_translation_jacobian(L, b, a) * v);
  Vec<double> rhs_left = associator_differential(L, AssociatorKind::left, b, a) * w;
  r.left = max_abs(lhs_left - rhs_left);

  // Right law: ω at a·b of R_{b*} v.
  Vec<double> ab = L.product(a, b);
  Vec<double> lhs_right = canonical_form(L, ab, right_translation_jacobian(L, b, a) * v);
  Vec<double> rhs_right = ad_inverse_differential(L, b, a) * w;
  r.right = max_abs(lhs_right - rhs_right);

  // L_{b*} X_a = l̂_(b,a)* X_{b·a}, where X is the left fundamental field of w and
  // l̂_(b,a) fixes b·a, so its differential is taken there.
  Vec<double> Xa = left_frame(L, a) * w;
  Vec<double> Xba = left_frame(L, ba) * w;
  Mat<double> lhat = jacobian([&]<class S>(const Vec<S>& c) {
    return associator(L, AssociatorKind::adjoint, lift_vec<S>(b), lift_vec<S>(a), c);
  }, ba);
  r.adjoint = max_abs(left_translation_jacobian(L, b, a) * Xa - lhat * Xba);
  return r;
}

}  // namespace loopbundle
