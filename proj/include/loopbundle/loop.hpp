#pragma once

// The five catalog loops and the type-erased Loop handle. Every product and
// division is a template over the scalar so that dual numbers can be pushed
// through it; the Loop handle dispatches through std::variant.

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <variant>

#include "loopbundle/complex.hpp"
#include "loopbundle/errors.hpp"
#include "loopbundle/linalg.hpp"
#include "loopbundle/newton.hpp"
#include "loopbundle/random.hpp"

namespace loopbundle {

inline constexpr double kSingularGuard = 1e-9;

inline void guard_denominator(double magnitude, const char* what) {
  if (!(magnitude >= kSingularGuard)) throw LoopError(ErrorKind::DomainSingularity, what);
}

template <class T>
Cplx<T> as_cplx(const Vec<T>& v) {
  return {v[0], v[1]};
}
template <class T>
Vec<T> as_vec(const Cplx<T>& z) {
  return {z.re, z.im};
}

namespace detail {

inline bool all_finite(const Vec<double>& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

inline Vec<double> sample_disk(std::mt19937_64& rng, double radius) {
  for (;;) {
    double x = uniform(rng, -radius, radius), y = uniform(rng, -radius, radius);
    if (x * x + y * y < radius * radius) return {x, y};
  }
}

// Newton solve for a·x = b (left) or y·a = b (right), starting at the identity.
// The value is solved in double precision first; derivative components (when T
// is a dual type) are then settled by iterations with the frozen primal
// Jacobian, which converge in depth+1 steps because those parts are nilpotent.
template <class LoopT, class T, class Build>
Vec<T> newton_division(const LoopT& L, const Vec<T>& p, const Vec<T>& q, Build&& build) {
  const Vec<double> p0 = primal_vec(p), q0 = primal_vec(q);
  auto res0 = [&]<class S>(const Vec<S>& x) {
    return L.template difference<S>(build(lift_vec<S>(p0), x), lift_vec<S>(q0));
  };
  Vec<double> x0 = newton_solve(res0, Vec<double>(p.size(), 0.0));
  if constexpr (std::is_same_v<T, double>) {
    return x0;
  } else {
    Mat<T> jinv = lift_mat<T>(inverse(jacobian(res0, x0)));
    Vec<T> x = lift_vec<T>(x0);
    for (int k = 0; k < dual_depth_v<T> + 1; ++k)
      x = x - jinv * L.template difference<T>(build(p, x), q);
    return x;
  }
}
template <class LoopT, class T>
Vec<T> newton_left_div(const LoopT& L, const Vec<T>& a, const Vec<T>& b) {
  return newton_division(L, a, b, [&]<class S>(const Vec<S>& aa, const Vec<S>& x) {
    return L.template product<S>(aa, x);
  });
}
template <class LoopT, class T>
Vec<T> newton_right_div(const LoopT& L, const Vec<T>& b, const Vec<T>& a) {
  return newton_division(L, a, b, [&]<class S>(const Vec<S>& aa, const Vec<S>& y) {
    return L.template product<S>(y, aa);
  });
}

}  // namespace detail

// ---------------------------------------------------------------------------
// ℝ/ℤ with x∗y = x + y + f(x) + f(y) − f(x+y), f(x) = (1 − cos 2πx)/4.

struct RzLoop {
  static constexpr std::size_t dim = 1;
  std::string name() const { return "rz"; }

  template <class T>
  static T f(const T& x) {
    return (1.0 - cos(x * (2.0 * std::numbers::pi))) * 0.25;
  }
  template <class T>
  static T wrap01(const T& x) {
    return x - floor(x);
  }
  template <class T>
  static T wrap_centered(const T& x) {
    return x - floor(x + 0.5);
  }

  template <class T>
  Vec<T> product(const Vec<T>& a, const Vec<T>& b) const {
    return {wrap01(a[0] + b[0] + f(a[0]) + f(b[0]) - f(a[0] + b[0]))};
  }
  template <class T>
  Vec<T> difference(const Vec<T>& x, const Vec<T>& y) const {
    return {wrap_centered(x[0] - y[0])};
  }
  template <class T>
  Vec<T> left_div(const Vec<T>& a, const Vec<T>& b) const {
    return wrap(detail::newton_left_div(*this, a, b));
  }
  template <class T>
  Vec<T> right_div(const Vec<T>& b, const Vec<T>& a) const {
    return wrap(detail::newton_right_div(*this, b, a));
  }
  template <class T>
  static Vec<T> wrap(Vec<T> x) {
    x[0] = wrap01(x[0]);
    return x;
  }

  bool in_domain(const Vec<double>& x) const { return detail::all_finite(x); }
  double default_radius() const { return 0.05; }
  double wide_radius() const { return 0.1; }
  Vec<double> sample(std::mt19937_64& rng, double radius) const {
    return {wrap01(uniform(rng, -radius, radius))};
  }
};

// ---------------------------------------------------------------------------
// Qℂ: ζ·η = (ζ + η)/(1 − ζ̄η).

struct QcLoop {
  static constexpr std::size_t dim = 2;
  std::string name() const { return "qc"; }

  template <class T>
  Vec<T> product(const Vec<T>& a, const Vec<T>& b) const {
    Cplx<T> z = as_cplx(a), w = as_cplx(b);
    Cplx<T> den = Cplx<T>(1.0) - conj(z) * w;
    guard_denominator(primal_abs(den), "qc product: conj(a)*b = 1");
    return as_vec((z + w) / den);
  }
  template <class T>
  Vec<T> left_div(const Vec<T>& a, const Vec<T>& b) const {
    Cplx<T> z = as_cplx(a), w = as_cplx(b);
    Cplx<T> den = Cplx<T>(1.0) + conj(z) * w;
    guard_denominator(primal_abs(den), "qc left division: conj(a)*b = -1");
    return as_vec((w - z) / den);
  }
  // y·a = b  ⇔  y + c ȳ = d with c = b a, d = b − a.
  template <class T>
  Vec<T> right_div(const Vec<T>& b, const Vec<T>& a) const {
    Cplx<T> c = as_cplx(b) * as_cplx(a), d = as_cplx(b) - as_cplx(a);
    T den = 1.0 - norm2(c);
    guard_denominator(std::abs(primal(den)), "qc right division: |b a| = 1");
    return as_vec((d - c * conj(d)) / den);
  }
  template <class T>
  Vec<T> difference(const Vec<T>& x, const Vec<T>& y) const {
    return x - y;
  }

  bool in_domain(const Vec<double>& x) const {
    return detail::all_finite(x) && std::hypot(x[0], x[1]) < 1e3;
  }
  double default_radius() const { return 0.5; }
  double wide_radius() const { return 2.0; }
  Vec<double> sample(std::mt19937_64& rng, double radius) const {
    return detail::sample_disk(rng, radius);
  }
};

// ---------------------------------------------------------------------------
// QH² on the open unit disk: ζ∗η = (ζ + η)/(1 + ζ̄η).

struct Qh2Loop {
  static constexpr std::size_t dim = 2;
  std::string name() const { return "qh2"; }

  template <class T>
  Vec<T> product(const Vec<T>& a, const Vec<T>& b) const {
    Cplx<T> z = as_cplx(a), w = as_cplx(b);
    Cplx<T> den = Cplx<T>(1.0) + conj(z) * w;
    guard_denominator(primal_abs(den), "qh2 product: conj(a)*b = -1");
    return as_vec((z + w) / den);
  }
  template <class T>
  Vec<T> left_div(const Vec<T>& a, const Vec<T>& b) const {
    Cplx<T> z = as_cplx(a), w = as_cplx(b);
    Cplx<T> den = Cplx<T>(1.0) - conj(z) * w;
    guard_denominator(primal_abs(den), "qh2 left division: conj(a)*b = 1");
    return in_chart(as_vec((w - z) / den));
  }
  // y∗a = b  ⇔  y − c ȳ = d with c = b a, d = b − a.
  template <class T>
  Vec<T> right_div(const Vec<T>& b, const Vec<T>& a) const {
    Cplx<T> c = as_cplx(b) * as_cplx(a), d = as_cplx(b) - as_cplx(a);
    T den = 1.0 - norm2(c);
    guard_denominator(std::abs(primal(den)), "qh2 right division: |b a| = 1");
    return in_chart(as_vec((d + c * conj(d)) / den));
  }
  template <class T>
  Vec<T> difference(const Vec<T>& x, const Vec<T>& y) const {
    return x - y;
  }
  template <class T>
  static Vec<T> in_chart(Vec<T> x) {
    if (!(std::hypot(primal(x[0]), primal(x[1])) < 1.0))
      throw LoopError(ErrorKind::NoSolutionInChart, "qh2: solution outside the unit disk");
    return x;
  }

  bool in_domain(const Vec<double>& x) const {
    return detail::all_finite(x) && std::hypot(x[0], x[1]) < 1.0;
  }
  double default_radius() const { return 0.5; }
  double wide_radius() const { return 0.95; }
  Vec<double> sample(std::mt19937_64& rng, double radius) const {
    return detail::sample_disk(rng, radius);
  }
};

// ---------------------------------------------------------------------------
// Q𝖧ℝ: ζ∗η = (ζ + η)(1 + (K/4) ζ⁺η)⁻¹ on ζ = ζ⁰ + i(ζ¹ i + ζ² j + ζ³ k).

template <class T>
BiQuat<T> to_biquat(const Vec<T>& v) {
  BiQuat<T> q;
  q.c[0] = Cplx<T>(v[0], T(0.0));
  for (int k = 1; k < 4; ++k) q.c[k] = Cplx<T>(T(0.0), v[k]);
  return q;
}
template <class T>
Vec<T> from_biquat(const BiQuat<T>& q) {
  return {q.c[0].re, q.c[1].im, q.c[2].im, q.c[3].im};
}

struct QhrLoop {
  static constexpr std::size_t dim = 4;
  double K = 4.0;
  std::string name() const;

  template <class T>
  Vec<T> product(const Vec<T>& a, const Vec<T>& b) const {
    BiQuat<T> z = to_biquat(a), w = to_biquat(b);
    BiQuat<T> d = qconj(z) * w * (K / 4.0);
    d.c[0] = d.c[0] + Cplx<T>(1.0);
    Cplx<T> n = qnorm(d);
    guard_denominator(primal_abs(n), "qhr product: 1 + (K/4) a⁺b not invertible");
    return from_biquat((z + w) * scalar_div(qconj(d), n));
  }
  template <class T>
  Vec<T> left_div(const Vec<T>& a, const Vec<T>& b) const {
    return detail::newton_left_div(*this, a, b);
  }
  template <class T>
  Vec<T> right_div(const Vec<T>& b, const Vec<T>& a) const {
    return detail::newton_right_div(*this, b, a);
  }
  template <class T>
  Vec<T> difference(const Vec<T>& x, const Vec<T>& y) const {
    return x - y;
  }

  bool in_domain(const Vec<double>& x) const {
    return detail::all_finite(x) && max_abs(x) < 1e3;
  }
  double default_radius() const { return 0.3; }
  double wide_radius() const { return 0.3; }
  Vec<double> sample(std::mt19937_64& rng, double radius) const {
    Vec<double> x(4);
    for (auto& c : x) c = uniform(rng, -radius, radius);
    return x;
  }
};

// ---------------------------------------------------------------------------
// QSU(2): U_η ∗ U_ζ = U_η U_ζ Λ(η,ζ), evaluated on matrices.

template <class T>
struct Unitary2 {
  Cplx<T> m[2][2];
};

template <class T>
Unitary2<T> su2_of(const Cplx<T>& eta) {
  T s = 1.0 / sqrt(1.0 + norm2(eta));
  Unitary2<T> u;
  u.m[0][0] = Cplx<T>(s, T(0.0));
  u.m[0][1] = eta * s;
  u.m[1][0] = -(conj(eta) * s);
  u.m[1][1] = Cplx<T>(s, T(0.0));
  return u;
}

template <class T>
Unitary2<T> operator*(const Unitary2<T>& a, const Unitary2<T>& b) {
  Unitary2<T> r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j];
  return r;
}

/// U_η U_ζ Λ with Λ = diag(e^{iφ/2}, e^{-iφ/2}), φ = 2 arg(1 − η̄ζ).
template <class T>
Unitary2<T> su2_loop_product(const Cplx<T>& eta, const Cplx<T>& zeta) {
  Cplx<T> w = Cplx<T>(1.0) - conj(eta) * zeta;
  guard_denominator(primal_abs(w), "qsu2 product: 1 - conj(eta) zeta = 0");
  Cplx<T> phase = w / abs(w);  // e^{iφ/2}
  Unitary2<T> u = su2_of(eta) * su2_of(zeta);
  for (int i = 0; i < 2; ++i) {
    u.m[i][0] = u.m[i][0] * phase;
    u.m[i][1] = u.m[i][1] * conj(phase);
  }
  return u;
}

struct Qsu2Loop {
  static constexpr std::size_t dim = 2;
  std::string name() const { return "qsu2"; }

  template <class T>
  Vec<T> product(const Vec<T>& a, const Vec<T>& b) const {
    Unitary2<T> u = su2_loop_product(as_cplx(a), as_cplx(b));
    return as_vec(u.m[0][1] / u.m[0][0].re);
  }
  template <class T>
  Vec<T> left_div(const Vec<T>& a, const Vec<T>& b) const {
    return detail::newton_left_div(*this, a, b);
  }
  template <class T>
  Vec<T> right_div(const Vec<T>& b, const Vec<T>& a) const {
    return detail::newton_right_div(*this, b, a);
  }
  template <class T>
  Vec<T> difference(const Vec<T>& x, const Vec<T>& y) const {
    return x - y;
  }

  bool in_domain(const Vec<double>& x) const {
    return detail::all_finite(x) && std::hypot(x[0], x[1]) < 1e3;
  }
  double default_radius() const { return 0.5; }
  double wide_radius() const { return 0.5; }
  Vec<double> sample(std::mt19937_64& rng, double radius) const {
    return detail::sample_disk(rng, radius);
  }
};

// ---------------------------------------------------------------------------

enum class LoopKind { rz, qc, qh2, qhr, qsu2 };

struct LoopSpec {
  LoopKind kind = LoopKind::qc;
  double K = 4.0;  // qhr only
};

/// A smooth loop in a chart: product, both divisions, identity at the origin.
class Loop {
 public:
  using Impl = std::variant<RzLoop, QcLoop, Qh2Loop, QhrLoop, Qsu2Loop>;

  explicit Loop(Impl impl) : impl_(std::move(impl)) {}

  std::size_t dim() const {
    return std::visit([](const auto& l) { return l.dim; }, impl_);
  }
  std::string name() const {
    return std::visit([](const auto& l) { return l.name(); }, impl_);
  }
  Vec<double> identity() const { return Vec<double>(dim(), 0.0); }
  const Impl& impl() const { return impl_; }
  LoopKind kind() const { return static_cast<LoopKind>(impl_.index()); }
  bool is_rz() const { return std::holds_alternative<RzLoop>(impl_); }

  bool in_domain(const Vec<double>& x) const {
    return x.size() == dim() && std::visit([&](const auto& l) { return l.in_domain(x); }, impl_);
  }

  template <class T>
  Vec<T> product(const Vec<T>& a, const Vec<T>& b) const {
    check(a);
    check(b);
    return std::visit([&](const auto& l) { return l.template product<T>(a, b); }, impl_);
  }
  /// x with a·x = b.
  template <class T>
  Vec<T> left_div(const Vec<T>& a, const Vec<T>& b) const {
    check(a);
    check(b);
    return std::visit([&](const auto& l) { return l.template left_div<T>(a, b); }, impl_);
  }
  /// y with y·a = b.
  template <class T>
  Vec<T> right_div(const Vec<T>& b, const Vec<T>& a) const {
    check(a);
    check(b);
    return std::visit([&](const auto& l) { return l.template right_div<T>(b, a); }, impl_);
  }
  /// Chart difference x − y (wrapped for ℝ/ℤ).
  template <class T>
  Vec<T> difference(const Vec<T>& x, const Vec<T>& y) const {
    return std::visit([&](const auto& l) { return l.template difference<T>(x, y); }, impl_);
  }

  double distance(const Vec<double>& x, const Vec<double>& y) const { return max_abs(difference(x, y)); }

  double default_radius() const {
    return std::visit([](const auto& l) { return l.default_radius(); }, impl_);
  }
  double wide_radius() const {
    return std::visit([](const auto& l) { return l.wide_radius(); }, impl_);
  }
  Vec<double> sample(std::mt19937_64& rng) const { return sample(rng, default_radius()); }
  Vec<double> sample(std::mt19937_64& rng, double radius) const {
    return std::visit([&](const auto& l) { return l.sample(rng, radius); }, impl_);
  }

 private:
  template <class T>
  void check(const Vec<T>& x) const {
    if (x.size() != dim()) throw LoopError(ErrorKind::OutOfDomain, "wrong coordinate count");
    if (!in_domain(primal_vec(x))) throw LoopError(ErrorKind::OutOfDomain, name() + ": point outside chart");
  }

  Impl impl_;
};

Loop make_loop(const LoopSpec& spec);
/// "rz", "qc", "qh2", "qhr:K=<real>" (K defaults to 4), "qsu2".
Loop parse_loop(const std::string& text);
std::vector<std::string> catalog_names();

// ---------------------------------------------------------------------------
// Geometric charts of the two complex disk loops.

enum class ChartKind {
  sphere,       // ζ = e^{iφ} tan(θ/2), projection of S² from the south pole
  hyperboloid,  // ζ = e^{iφ} tanh(θ/2)
};

struct ChartAngles {
  double theta, phi;
};

/// PoleSingularity at θ = π on the sphere; OutOfDomain for θ < 0.
Vec<double> chart_map(ChartKind kind, ChartAngles angles);
/// φ in (−π, π]; OutOfDomain for |ζ| ≥ 1 on the hyperboloid.
ChartAngles chart_map_inverse(ChartKind kind, const Vec<double>& zeta);

using UnitaryRep = Unitary2<double>;

struct Qsu2Product {
  UnitaryRep matrix;
  Cplx<double> coordinate;  // β/α of the product matrix
};

UnitaryRep qsu2_matrix(const Cplx<double>& eta);
/// DomainSingularity when 1 − η̄ζ = 0.
Qsu2Product qsu2_product(const Cplx<double>& eta, const Cplx<double>& zeta);

}  // namespace loopbundle
