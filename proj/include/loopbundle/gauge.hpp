#pragma once

// Local connection forms on U × Q with U ⊂ ℝ^m a base chart:
//   ω = Ad⁻¹_y(e)* A(x) dx + ω_C(y) dy,
// covariant derivatives D_μ = ∂_μ − A^i_μ L̄_i along right quasi-invariant
// fields, curvature, gauge transformations and the structure equation.
//
// Potentials and loop-valued fields are evaluated for double and for nested
// duals up to depth 4, so every quantity below can be differentiated by
// adding a dual layer.

#include <functional>
#include <memory>

#include "loopbundle/tangent.hpp"

namespace loopbundle {

inline constexpr int kMaxFieldDepth = 4;

/// A^i_μ(x) as an n × m matrix.
class GaugePotential {
 public:
  virtual ~GaugePotential() = default;
  virtual std::size_t fiber_dim() const = 0;
  virtual std::size_t base_dim() const = 0;
  virtual Mat<double> eval(const Vec<double>& x) const = 0;
  virtual Mat<D1> eval(const Vec<D1>& x) const = 0;
  virtual Mat<D2> eval(const Vec<D2>& x) const = 0;
  virtual Mat<D3> eval(const Vec<D3>& x) const = 0;
  virtual Mat<D4> eval(const Vec<D4>& x) const = 0;
};

template <class Derived>
class PotentialImpl : public GaugePotential {
 public:
  Mat<double> eval(const Vec<double>& x) const override { return self().template evaluate<double>(x); }
  Mat<D1> eval(const Vec<D1>& x) const override { return self().template evaluate<D1>(x); }
  Mat<D2> eval(const Vec<D2>& x) const override { return self().template evaluate<D2>(x); }
  Mat<D3> eval(const Vec<D3>& x) const override { return self().template evaluate<D3>(x); }
  Mat<D4> eval(const Vec<D4>& x) const override { return self().template evaluate<D4>(x); }

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

/// Loop-valued (or scalar-valued, dim 1) field on the base.
class LoopField {
 public:
  virtual ~LoopField() = default;
  virtual std::size_t dim() const = 0;
  virtual Vec<double> eval(const Vec<double>& x) const = 0;
  virtual Vec<D1> eval(const Vec<D1>& x) const = 0;
  virtual Vec<D2> eval(const Vec<D2>& x) const = 0;
  virtual Vec<D3> eval(const Vec<D3>& x) const = 0;
  virtual Vec<D4> eval(const Vec<D4>& x) const = 0;
};

template <class Derived>
class FieldImpl : public LoopField {
 public:
  Vec<double> eval(const Vec<double>& x) const override { return self().template evaluate<double>(x); }
  Vec<D1> eval(const Vec<D1>& x) const override { return self().template evaluate<D1>(x); }
  Vec<D2> eval(const Vec<D2>& x) const override { return self().template evaluate<D2>(x); }
  Vec<D3> eval(const Vec<D3>& x) const override { return self().template evaluate<D3>(x); }
  Vec<D4> eval(const Vec<D4>& x) const override { return self().template evaluate<D4>(x); }

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

using PotentialPtr = std::shared_ptr<const GaugePotential>;
using FieldPtr = std::shared_ptr<const LoopField>;

/// Real polynomial of degree ≤ 2 in x: c0 + c1·x + xᵀ c2 x.
struct Quadratic {
  double c0 = 0.0;
  Vec<double> c1;
  Mat<double> c2;

  template <class T>
  T operator()(const Vec<T>& x) const {
    T s(c0);
    for (std::size_t a = 0; a < c1.size(); ++a) s += c1[a] * x[a];
    for (std::size_t a = 0; a < c2.rows(); ++a)
      for (std::size_t b = 0; b < c2.cols(); ++b) s += c2(a, b) * x[a] * x[b];
    return s;
  }
  static Quadratic random(std::size_t m, std::mt19937_64& rng, double scale, int degree = 2);
};

/// Every component of A is an independent Quadratic.
class PolynomialPotential : public PotentialImpl<PolynomialPotential> {
 public:
  PolynomialPotential(std::size_t n, std::size_t m, std::vector<Quadratic> components)
      : n_(n), m_(m), comp_(std::move(components)) {}
  std::size_t fiber_dim() const override { return n_; }
  std::size_t base_dim() const override { return m_; }
  const Quadratic& component(std::size_t i, std::size_t mu) const { return comp_[i * m_ + mu]; }

  template <class T>
  Mat<T> evaluate(const Vec<T>& x) const {
    Mat<T> A(n_, m_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t mu = 0; mu < m_; ++mu) A(i, mu) = component(i, mu)(x);
    return A;
  }

 private:
  std::size_t n_, m_;
  std::vector<Quadratic> comp_;
};

/// A^i_μ = Σ_ν a sin(k x_ν) + b cos(k x_ν), k = 1, 2; periodic on angle charts.
class TrigPotential : public PotentialImpl<TrigPotential> {
 public:
  TrigPotential(std::size_t n, std::size_t m, std::vector<double> coeffs) : n_(n), m_(m), c_(std::move(coeffs)) {}
  std::size_t fiber_dim() const override { return n_; }
  std::size_t base_dim() const override { return m_; }

  template <class T>
  Mat<T> evaluate(const Vec<T>& x) const {
    Mat<T> A(n_, m_);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t mu = 0; mu < m_; ++mu)
        for (std::size_t nu = 0; nu < m_; ++nu)
          for (int f = 1; f <= 2; ++f) {
            A(i, mu) += c_[k] * sin(x[nu] * double(f)) + c_[k + 1] * cos(x[nu] * double(f));
            k += 2;
          }
    return A;
  }
  static std::size_t coefficient_count(std::size_t n, std::size_t m) { return n * m * m * 4; }

 private:
  std::size_t n_, m_;
  std::vector<double> c_;
};

PotentialPtr random_polynomial_potential(std::size_t n, std::size_t m, std::uint64_t seed, double scale = 0.5,
                                         int degree = 2);
PotentialPtr random_trig_potential(std::size_t n, std::size_t m, std::uint64_t seed, double scale = 0.5);

/// Fixed loop element.
class ConstantField : public FieldImpl<ConstantField> {
 public:
  explicit ConstantField(Vec<double> q) : q_(std::move(q)) {}
  std::size_t dim() const override { return q_.size(); }
  template <class T>
  Vec<T> evaluate(const Vec<T>&) const {
    return lift_vec<T>(q_);
  }

 private:
  Vec<double> q_;
};

/// r(x) e^{i g(x)} in a 2-dimensional fiber chart.
class PhaseField : public FieldImpl<PhaseField> {
 public:
  PhaseField(Quadratic modulus, Quadratic phase) : r_(std::move(modulus)), g_(std::move(phase)) {}
  std::size_t dim() const override { return 2; }
  template <class T>
  Vec<T> evaluate(const Vec<T>& x) const {
    T r = r_(x), g = g_(x);
    return {r * cos(g), r * sin(g)};
  }

 private:
  Quadratic r_, g_;
};

/// Each component an independent Quadratic.
class PolynomialField : public FieldImpl<PolynomialField> {
 public:
  explicit PolynomialField(std::vector<Quadratic> comps) : c_(std::move(comps)) {}
  std::size_t dim() const override { return c_.size(); }
  template <class T>
  Vec<T> evaluate(const Vec<T>& x) const {
    Vec<T> out;
    for (const auto& c : c_) out.push_back(c(x));
    return out;
  }

 private:
  std::vector<Quadratic> c_;
};

/// Scalar c0 + c1 cos(x_0); partition weights on angle charts.
class CosineField : public FieldImpl<CosineField> {
 public:
  CosineField(double c0, double c1) : c0_(c0), c1_(c1) {}
  std::size_t dim() const override { return 1; }
  template <class T>
  Vec<T> evaluate(const Vec<T>& x) const {
    return {T(c0_) + c1_ * cos(x[0])};
  }

 private:
  double c0_, c1_;
};

/// x ↦ e / q(x), the element whose right product with q(x) is e.
class RightInverseField : public FieldImpl<RightInverseField> {
 public:
  RightInverseField(Loop L, FieldPtr q) : L_(std::move(L)), q_(std::move(q)) {}
  std::size_t dim() const override { return q_->dim(); }
  template <class T>
  Vec<T> evaluate(const Vec<T>& x) const {
    return L_.right_div(lift_vec<T>(L_.identity()), q_->eval(x));
  }

 private:
  Loop L_;
  FieldPtr q_;
};

struct LocalConnectionForm {
  Loop fiber;
  PotentialPtr A;
};

// ---------------------------------------------------------------------------
// Pointwise building blocks

/// Columns are the right quasi-invariant fields L̄_i at y.
Mat<double> right_quasi_invariant_basis(const Loop& L, const Vec<double>& y);

/// Differential at e of c ↦ Ad⁻¹_y(e)(c) = y\(c·y).
template <class T>
Mat<T> ad_inverse_at_identity(const Loop& L, const Vec<T>& y) {
  return jacobian([&]<class S>(const Vec<S>& c) {
    Vec<S> ys = lift_vec<S>(y);
    return ad_map_inverse(L, ys, lift_vec<S>(L.identity()), c);
  }, lift_vec<T>(L.identity()));
}

/// n × (m+n) matrix of ω at z = (x, y).
template <class T>
Mat<T> connection_matrix(const LocalConnectionForm& form, const Vec<T>& z) {
  const std::size_t n = form.fiber.dim(), m = form.A->base_dim();
  Vec<T> x(z.begin(), z.begin() + m), y(z.begin() + m, z.end());
  Mat<T> H = ad_inverse_at_identity(form.fiber, y) * form.A->eval(x);
  Mat<T> V = inverse_frame(left_frame(form.fiber, y));
  Mat<T> W(n, m + n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t mu = 0; mu < m; ++mu) W(i, mu) = H(i, mu);
    for (std::size_t j = 0; j < n; ++j) W(i, m + j) = V(i, j);
  }
  return W;
}

Vec<double> join(const Vec<double>& x, const Vec<double>& y);

/// Tangent vector (0, R(y) u): the fundamental vertical vector of u ∈ T_eQ.
Vec<double> vertical_vector(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y,
                            const Vec<double>& u);
/// Horizontal lift of the base vector v: (v, −R̄(y) A(x) v).
Vec<double> horizontal_lift(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y,
                            const Vec<double>& v);
/// X − V(ω(X)).
Vec<double> horizontal_part(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y,
                            const Vec<double>& X);
Vec<double> omega_apply(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y,
                        const Vec<double>& X);
/// dω(X, Y) with dω(X,Y) = ½(Xω(Y) − Yω(X) − ω([X,Y])).
Vec<double> domega_apply(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y,
                         const Vec<double>& X, const Vec<double>& Y);

// ---------------------------------------------------------------------------
// Covariant derivatives

/// Polynomial of degree ≤ 3 in (x, y), used as a test function.
class TestFunction {
 public:
  struct Term {
    std::vector<int> powers;
    double coeff;
  };
  TestFunction(std::size_t m, std::size_t n, std::vector<Term> terms) : m_(m), n_(n), terms_(std::move(terms)) {}
  static TestFunction random(std::size_t m, std::size_t n, std::uint64_t seed, int degree = 3);

  template <class T>
  T operator()(const Vec<T>& x, const Vec<T>& y) const {
    T s(0.0);
    for (const auto& t : terms_) {
      T p(t.coeff);
      for (std::size_t k = 0; k < m_ + n_; ++k)
        for (int e = 0; e < t.powers[k]; ++e) p = p * (k < m_ ? x[k] : y[k - m_]);
      s += p;
    }
    return s;
  }

 private:
  std::size_t m_, n_;
  std::vector<Term> terms_;
};

namespace detail {
template <class T>
Vec<Dual<T>> seed_dual(const Vec<T>& v, std::size_t k) {
  Vec<Dual<T>> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Dual<T>(v[i], T(i == k ? 1.0 : 0.0));
  return out;
}
}  // namespace detail

/// (D_μ g)(x, y) = ∂_μ g − A^i_μ L̄_i g for a generic scalar function g(x, y).
template <class T, class G>
T apply_covariant(const LocalConnectionForm& form, std::size_t mu, const G& g, const Vec<T>& x, const Vec<T>& y) {
  const std::size_t n = y.size();
  const std::size_t none = static_cast<std::size_t>(-1);
  T out = g(detail::seed_dual(x, mu), detail::seed_dual(y, none)).d;
  Mat<T> Rbar = right_frame(form.fiber, y);
  Mat<T> A = form.A->eval(x);
  for (std::size_t j = 0; j < n; ++j) {
    T dj = g(detail::seed_dual(x, none), detail::seed_dual(y, j)).d;
    T coef(0.0);
    for (std::size_t i = 0; i < n; ++i) coef += Rbar(j, i) * A(i, mu);
    out -= coef * dj;
  }
  return out;
}

double covariant_derivative_apply(const LocalConnectionForm& form, std::size_t mu, const TestFunction& f,
                                  const Vec<double>& x, const Vec<double>& y);

/// F(i, μ, ν) = F^i_μν, n × m × m.
struct Curvature {
  std::size_t n = 0, m = 0;
  std::vector<double> data;
  Curvature(std::size_t n_, std::size_t m_) : n(n_), m(m_), data(n_ * m_ * m_, 0.0) {}
  double& operator()(std::size_t i, std::size_t mu, std::size_t nu) { return data[(i * m + mu) * m + nu]; }
  double operator()(std::size_t i, std::size_t mu, std::size_t nu) const { return data[(i * m + mu) * m + nu]; }
  Vec<double> component(std::size_t mu, std::size_t nu) const;
};

/// F^i_μν = ∂_μA^i_ν − ∂_νA^i_μ − A^j_μ A^p_ν C̄^i_jp(y), C̄ from the right frame.
Curvature curvature(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y);

/// max over μ<ν of |[D_μ, D_ν] f + F^i_μν L̄_i f|.
double commutator_residual(const LocalConnectionForm& form, const TestFunction& f, const Vec<double>& x,
                           const Vec<double>& y);

/// max over μ of |ω(D_μ)|.
double omega_annihilates_D_residual(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y);

// ---------------------------------------------------------------------------
// Gauge transformations

/// A_β = Ad⁻¹_{q_αβ}(q_βα)* A_α + l_(q_βα,q_αβ)* θ_αβ with θ_αβ = ω_C(dq_αβ).
class GaugeTransformedPotential : public PotentialImpl<GaugeTransformedPotential> {
 public:
  GaugeTransformedPotential(Loop L, PotentialPtr A, FieldPtr q_ab, FieldPtr q_ba)
      : L_(std::move(L)), A_(std::move(A)), q_ab_(std::move(q_ab)), q_ba_(std::move(q_ba)) {}
  std::size_t fiber_dim() const override { return A_->fiber_dim(); }
  std::size_t base_dim() const override { return A_->base_dim(); }

  template <class T>
  Mat<T> evaluate(const Vec<T>& x) const {
    if constexpr (dual_depth_v<T> >= kMaxFieldDepth) {
      throw LoopError(ErrorKind::UnknownKind, "gauge-transformed potential: derivative order too high");
    } else {
      Vec<T> qab = q_ab_->eval(x), qba = q_ba_->eval(x);
      Vec<T> e = lift_vec<T>(L_.identity());
      Mat<T> adinv = jacobian([&]<class S>(const Vec<S>& c) {
        return ad_map_inverse(L_, lift_vec<S>(qab), lift_vec<S>(qba), c);
      }, e);
      Mat<T> lstar = jacobian([&]<class S>(const Vec<S>& c) {
        return associator(L_, AssociatorKind::left, lift_vec<S>(qba), lift_vec<S>(qab), c);
      }, e);
      Mat<T> dq = jacobian([&]<class S>(const Vec<S>& xs) { return q_ab_->eval(xs); }, x);
      Mat<T> theta = inverse_frame(left_frame(L_, qab)) * dq;
      Mat<T> out = adinv * A_->eval(x);
      return out + lstar * theta;
    }
  }

 private:
  Loop L_;
  PotentialPtr A_;
  FieldPtr q_ab_, q_ba_;
};

/// σ_β^* of the connection rebuilt from A_α on U × Q:
/// A_β = Ad⁻¹_{q_αβ}(e)* A_α + ω_C(dq_αβ).
class PullbackPotential : public PotentialImpl<PullbackPotential> {
 public:
  PullbackPotential(Loop L, PotentialPtr A, FieldPtr q_ab) : L_(std::move(L)), A_(std::move(A)), q_ab_(std::move(q_ab)) {}
  std::size_t fiber_dim() const override { return A_->fiber_dim(); }
  std::size_t base_dim() const override { return A_->base_dim(); }

  template <class T>
  Mat<T> evaluate(const Vec<T>& x) const {
    if constexpr (dual_depth_v<T> >= kMaxFieldDepth) {
      throw LoopError(ErrorKind::UnknownKind, "pullback potential: derivative order too high");
    } else {
      Vec<T> qab = q_ab_->eval(x);
      Mat<T> dq = jacobian([&]<class S>(const Vec<S>& xs) { return q_ab_->eval(xs); }, x);
      Mat<T> out = ad_inverse_at_identity(L_, qab) * A_->eval(x);
      return out + inverse_frame(left_frame(L_, qab)) * dq;
    }
  }

 private:
  Loop L_;
  PotentialPtr A_;
  FieldPtr q_ab_;
};

/// Local form in chart β from the form in chart α. q_ab(x) is the α-coordinate
/// of the β-section, q_ba(x) the β-coordinate of the α-section.
LocalConnectionForm gauge_transform(const LocalConnectionForm& form, FieldPtr q_ab, FieldPtr q_ba);
LocalConnectionForm pullback_transform(const LocalConnectionForm& form, FieldPtr q_ab);

/// max |A_β(local) − A_β(pullback)| at x.
double gauge_two_route_residual(const LocalConnectionForm& form, FieldPtr q_ab, FieldPtr q_ba, const Vec<double>& x);

/// max over μ<ν of |F_β(x; y) − Ad⁻¹_{q_αβ}(q_βα)* F_α(x; y)|.
double curvature_gauge_residual(const LocalConnectionForm& form, FieldPtr q_ab, FieldPtr q_ba, const Vec<double>& x,
                                const Vec<double>& y);

// ---------------------------------------------------------------------------
// Structure equation and Bianchi identity

/// |dω(X,Y) + ½[ω(X), ω(Y)] − Ω(X,Y)| with Ω(X,Y) = dω(hX, hY) and the bracket
/// taken with the structure functions at y.
double structure_equation_residual(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y,
                                   const Vec<double>& X, const Vec<double>& Y);

/// For horizontal lifts D_μ, D_ν: max of |ω([D_μ,D_ν]) + 2Ω(D_μ,D_ν)| and
/// |2Ω(D_μ,D_ν) − Ad⁻¹_y(e)* F_μν(x; y)|.
double horizontal_bracket_residual(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y);

/// |dΩ(hX, hY, hZ)|.
double bianchi_residual(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y,
                        const Vec<double>& X, const Vec<double>& Y, const Vec<double>& Z);

// ---------------------------------------------------------------------------
// Gluing

struct GluePiece {
  std::function<bool(const Vec<double>&)> support;  // chart membership
  FieldPtr weight;                                  // scalar field (dim 1)
  PotentialPtr potential;                           // already expressed in the target chart
};

class GluedPotential : public PotentialImpl<GluedPotential> {
 public:
  explicit GluedPotential(std::vector<GluePiece> pieces) : pieces_(std::move(pieces)) {}
  std::size_t fiber_dim() const override { return pieces_.front().potential->fiber_dim(); }
  std::size_t base_dim() const override { return pieces_.front().potential->base_dim(); }

  template <class T>
  Mat<T> evaluate(const Vec<T>& x) const {
    Mat<T> out(fiber_dim(), base_dim());
    Vec<double> x0 = primal_vec(x);
    for (const auto& p : pieces_) {
      if (!p.support(x0)) continue;
      T w = p.weight->eval(x)[0];
      Mat<T> A = p.potential->eval(x);
      for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t mu = 0; mu < A.cols(); ++mu) out(i, mu) += w * A(i, mu);
    }
    return out;
  }

 private:
  std::vector<GluePiece> pieces_;
};

/// Checks Σλ = 1 and λ_α = 0 off its chart at the probe points
/// (PartitionInvalid otherwise) and returns the glued form.
LocalConnectionForm glue_connections(const Loop& L, std::vector<GluePiece> pieces,
                                     const std::vector<Vec<double>>& probes);

/// max |ω(V(u)) − u| over the unit vectors u.
double vertical_reproduction_residual(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y);

/// |ω_{(x, y·a)}(R_{a*}X) − Ad⁻¹_a(y)* ω_{(x,y)}(X)| for base vectors X.
double right_equivariance_residual(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y,
                                   const Vec<double>& a);

}  // namespace loopbundle
