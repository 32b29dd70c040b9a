#include "loopbundle/gauge.hpp"

#include <cmath>

#include "loopbundle/random.hpp"

namespace loopbundle {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

template <class T>
Mat<T> derivative_of_connection(const LocalConnectionForm& form, const Vec<T>& z, const Vec<T>& dir) {
  Vec<Dual<T>> zd(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) zd[i] = Dual<T>(z[i], dir[i]);
  return derivative_part(connection_matrix(form, zd));
}

/// dω^i_cd = ½(∂_c W^i_d − ∂_d W^i_c), one matrix per i.
template <class T>
std::vector<Mat<T>> domega_components(const LocalConnectionForm& form, const Vec<T>& z) {
  const std::size_t N = z.size(), n = form.fiber.dim();
  std::vector<Mat<T>> dW;
  for (std::size_t c = 0; c < N; ++c) {
    Vec<T> dir(N, T(0.0));
    dir[c] = T(1.0);
    dW.push_back(derivative_of_connection(form, z, dir));
  }
  std::vector<Mat<T>> out(n, Mat<T>(N, N));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < N; ++c)
      for (std::size_t d = 0; d < N; ++d) out[i](c, d) = 0.5 * (dW[c](i, d) - dW[d](i, c));
  return out;
}

/// Horizontal projector h = I − V W with V = [0; R(y)].
template <class T>
Mat<T> horizontal_projector(const LocalConnectionForm& form, const Vec<T>& z) {
  const std::size_t n = form.fiber.dim(), N = z.size(), m = N - n;
  Vec<T> y(z.begin() + m, z.end());
  Mat<T> R = left_frame(form.fiber, y);
  Mat<T> W = connection_matrix(form, z);
  Mat<T> h = Mat<T>::identity(N);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t a = 0; a < N; ++a) {
      T s(0.0);
      for (std::size_t k = 0; k < n; ++k) s += R(j, k) * W(k, a);
      h(m + j, a) -= s;
    }
  return h;
}

/// Ω^i_ab = dω^i_cd h^c_a h^d_b.
template <class T>
std::vector<Mat<T>> curvature_two_form(const LocalConnectionForm& form, const Vec<T>& z) {
  auto dw = domega_components(form, z);
  Mat<T> h = horizontal_projector(form, z);
  Mat<T> ht = h.transpose();
  for (auto& M : dw) M = ht * M * h;
  return dw;
}

template <class T>
Vec<T> horizontal_field(const LocalConnectionForm& form, std::size_t mu, const Vec<T>& z) {
  const std::size_t n = form.fiber.dim(), m = form.A->base_dim();
  Vec<T> x(z.begin(), z.begin() + m), y(z.begin() + m, z.end());
  Mat<T> Rbar = right_frame(form.fiber, y);
  Mat<T> A = form.A->eval(x);
  Vec<T> out(m + n, T(0.0));
  out[mu] = T(1.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) out[m + j] -= Rbar(j, i) * A(i, mu);
  return out;
}

double bilinear(const Mat<double>& M, const Vec<double>& X, const Vec<double>& Y) {
  double s = 0.0;
  for (std::size_t a = 0; a < X.size(); ++a)
    for (std::size_t b = 0; b < Y.size(); ++b) s += M(a, b) * X[a] * Y[b];
  return s;
}

double checked_max(double a, double b) {
  if (!(a == a) || !(b == b)) return INFINITY;
  return std::max(a, b);
}

}  // namespace

// ---------------------------------------------------------------------------

Quadratic Quadratic::random(std::size_t m, std::mt19937_64& rng, double scale, int degree) {
  Quadratic q;
  q.c0 = uniform(rng, -scale, scale);
  q.c1.assign(m, 0.0);
  q.c2 = Mat<double>(m, m);
  if (degree >= 1)
    for (auto& c : q.c1) c = uniform(rng, -scale, scale);
  if (degree >= 2)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a; b < m; ++b) q.c2(a, b) = uniform(rng, -scale, scale);
  return q;
}

PotentialPtr random_polynomial_potential(std::size_t n, std::size_t m, std::uint64_t seed, double scale, int degree) {
  auto rng = rng_for(seed, 0x9a7e);
  std::vector<Quadratic> comps;
  for (std::size_t k = 0; k < n * m; ++k) comps.push_back(Quadratic::random(m, rng, scale, degree));
  return std::make_shared<PolynomialPotential>(n, m, std::move(comps));
}

PotentialPtr random_trig_potential(std::size_t n, std::size_t m, std::uint64_t seed, double scale) {
  auto rng = rng_for(seed, 0x7419);
  std::vector<double> c(TrigPotential::coefficient_count(n, m));
  for (auto& v : c) v = uniform(rng, -scale, scale);
  return std::make_shared<TrigPotential>(n, m, std::move(c));
}

TestFunction TestFunction::random(std::size_t m, std::size_t n, std::uint64_t seed, int degree) {
  const std::size_t d = m + n;
  auto rng = rng_for(seed, 0x7e57);
  std::vector<Term> terms;
  std::vector<int> powers(d, 0);
  // Enumerate exponent vectors with total degree ≤ degree.
  std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
    if (k == d) {
      terms.push_back({powers, uniform(rng, -1.0, 1.0)});
      return;
    }
    for (int e = 0; e <= left; ++e) {
      powers[k] = e;
      rec(k + 1, left - e);
    }
    powers[k] = 0;
  };
  rec(0, degree);
  return TestFunction(m, n, std::move(terms));
}

// ---------------------------------------------------------------------------

Mat<double> right_quasi_invariant_basis(const Loop& L, const Vec<double>& y) { return right_frame(L, y); }

Vec<double> join(const Vec<double>& x, const Vec<double>& y) {
  Vec<double> z = x;
  z.insert(z.end(), y.begin(), y.end());
  return z;
}

Vec<double> vertical_vector(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y,
                            const Vec<double>& u) {
  Vec<double> out(x.size(), 0.0);
  Vec<double> v = left_frame(form.fiber, y) * u;
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

Vec<double> horizontal_lift(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y,
                            const Vec<double>& v) {
  Vec<double> Av = form.A->eval(x) * v;
  Vec<double> w = right_frame(form.fiber, y) * Av;
  Vec<double> out = v;
  for (double c : w) out.push_back(-c);
  return out;
}

Vec<double> omega_apply(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y,
                        const Vec<double>& X) {
  return connection_matrix(form, join(x, y)) * X;
}

Vec<double> horizontal_part(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y,
                            const Vec<double>& X) {
  return X - vertical_vector(form, x, y, omega_apply(form, x, y, X));
}

Vec<double> domega_apply(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y,
                         const Vec<double>& X, const Vec<double>& Y) {
  Vec<double> z = join(x, y);
  Vec<double> a = derivative_of_connection(form, z, X) * Y;
  Vec<double> b = derivative_of_connection(form, z, Y) * X;
  return scaled(a - b, 0.5);
}

// ---------------------------------------------------------------------------

double covariant_derivative_apply(const LocalConnectionForm& form, std::size_t mu, const TestFunction& f,
                                  const Vec<double>& x, const Vec<double>& y) {
  return apply_covariant<double>(form, mu, f, x, y);
}

Vec<double> Curvature::component(std::size_t mu, std::size_t nu) const {
  Vec<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (*this)(i, mu, nu);
  return out;
}

Curvature curvature(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y) {
  const std::size_t n = form.fiber.dim(), m = form.A->base_dim();
  Mat<double> A = form.A->eval(x);
  std::vector<Mat<double>> dA;
  for (std::size_t nu = 0; nu < m; ++nu) dA.push_back(derivative_part(form.A->eval(detail::seed_dual(x, nu))));
  Tensor3<double> Cbar = structure_functions(form.fiber, y, FrameSide::right);
  Curvature F(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t mu = 0; mu < m; ++mu)
      for (std::size_t nu = mu + 1; nu < m; ++nu) {
        double s = dA[mu](i, nu) - dA[nu](i, mu);
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t p = 0; p < n; ++p) s -= A(j, mu) * A(p, nu) * Cbar(i, j, p);
        F(i, mu, nu) = s;
        F(i, nu, mu) = -s;
      }
  return F;
}

double commutator_residual(const LocalConnectionForm& form, const TestFunction& f, const Vec<double>& x,
                           const Vec<double>& y) {
  const std::size_t n = form.fiber.dim(), m = form.A->base_dim();
  Curvature F = curvature(form, x, y);
  Mat<double> Rbar = right_frame(form.fiber, y);
  Vec<double> grad(n);
  for (std::size_t j = 0; j < n; ++j) grad[j] = f(detail::seed_dual(x, kNone), detail::seed_dual(y, j)).d;
  double worst = 0.0;
  for (std::size_t mu = 0; mu < m; ++mu)
    for (std::size_t nu = mu + 1; nu < m; ++nu) {
      auto D = [&](std::size_t outer, std::size_t inner) {
        auto g = [&]<class S>(const Vec<S>& xs, const Vec<S>& ys) {
          return apply_covariant<S>(form, inner, f, xs, ys);
        };
        return apply_covariant<double>(form, outer, g, x, y);
      };
      double comm = D(mu, nu) - D(nu, mu);
      for (std::size_t i = 0; i < n; ++i) {
        double Lf = 0.0;
        for (std::size_t j = 0; j < n; ++j) Lf += grad[j] * Rbar(j, i);
        comm += F(i, mu, nu) * Lf;
      }
      worst = checked_max(worst, std::abs(comm));
    }
  return worst;
}

double omega_annihilates_D_residual(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y) {
  const std::size_t m = form.A->base_dim();
  Mat<double> W = connection_matrix(form, join(x, y));
  double worst = 0.0;
  for (std::size_t mu = 0; mu < m; ++mu)
    worst = checked_max(worst, max_abs(W * horizontal_lift(form, x, y, unit_vector(m, mu))));
  return worst;
}

// ---------------------------------------------------------------------------

LocalConnectionForm gauge_transform(const LocalConnectionForm& form, FieldPtr q_ab, FieldPtr q_ba) {
  return {form.fiber, std::make_shared<GaugeTransformedPotential>(form.fiber, form.A, std::move(q_ab), std::move(q_ba))};
}

LocalConnectionForm pullback_transform(const LocalConnectionForm& form, FieldPtr q_ab) {
  return {form.fiber, std::make_shared<PullbackPotential>(form.fiber, form.A, std::move(q_ab))};
}

double gauge_two_route_residual(const LocalConnectionForm& form, FieldPtr q_ab, FieldPtr q_ba, const Vec<double>& x) {
  Mat<double> local = gauge_transform(form, q_ab, q_ba).A->eval(x);
  Mat<double> pulled = pullback_transform(form, q_ab).A->eval(x);
  return max_abs(local - pulled);
}

double curvature_gauge_residual(const LocalConnectionForm& form, FieldPtr q_ab, FieldPtr q_ba, const Vec<double>& x,
                                const Vec<double>& y) {
  const std::size_t m = form.A->base_dim();
  Mat<double> adinv = ad_inverse_differential(form.fiber, q_ab->eval(x), q_ba->eval(x));
  Curvature Fa = curvature(form, x, y);
  Curvature Fb = curvature(gauge_transform(form, q_ab, q_ba), x, y);
  double worst = 0.0;
  for (std::size_t mu = 0; mu < m; ++mu)
    for (std::size_t nu = mu + 1; nu < m; ++nu)
      worst = checked_max(worst, max_abs(Fb.component(mu, nu) - adinv * Fa.component(mu, nu)));
  return worst;
}

// ---------------------------------------------------------------------------

double structure_equation_residual(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y,
                                   const Vec<double>& X, const Vec<double>& Y) {
  const std::size_t n = form.fiber.dim();
  Vec<double> dw = domega_apply(form, x, y, X, Y);
  Vec<double> wx = omega_apply(form, x, y, X), wy = omega_apply(form, x, y, Y);
  Tensor3<double> C = structure_functions(form.fiber, y, FrameSide::left);
  Vec<double> omega = domega_apply(form, x, y, horizontal_part(form, x, y, X), horizontal_part(form, x, y, Y));
  Vec<double> r(n);
  for (std::size_t p = 0; p < n; ++p) {
    double br = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) br += C(p, i, j) * wx[i] * wy[j];
    r[p] = dw[p] + 0.5 * br - omega[p];
  }
  return max_abs(r);
}

double horizontal_bracket_residual(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y) {
  const std::size_t m = form.A->base_dim();
  Vec<double> z = join(x, y);
  Mat<double> W = connection_matrix(form, z);
  Mat<double> M = ad_inverse_at_identity(form.fiber, y);
  Curvature F = curvature(form, x, y);
  double worst = 0.0;
  for (std::size_t mu = 0; mu < m; ++mu)
    for (std::size_t nu = mu + 1; nu < m; ++nu) {
      auto field = [&](std::size_t k) {
        return [&form, k]<class S>(const Vec<S>& zs) { return horizontal_field(form, k, zs); };
      };
      Vec<double> Dm = horizontal_field(form, mu, z), Dn = horizontal_field(form, nu, z);
      Vec<double> bracket = jacobian(field(nu), z) * Dm - jacobian(field(mu), z) * Dn;
      Vec<double> two_omega = scaled(domega_apply(form, x, y, Dm, Dn), 2.0);
      worst = checked_max(worst, max_abs(W * bracket + two_omega));
      worst = checked_max(worst, max_abs(two_omega - M * F.component(mu, nu)));
    }
  return worst;
}

double bianchi_residual(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y,
                        const Vec<double>& X, const Vec<double>& Y, const Vec<double>& Z) {
  const std::size_t n = form.fiber.dim();
  Vec<double> z = join(x, y);
  Vec<double> hX = horizontal_part(form, x, y, X), hY = horizontal_part(form, x, y, Y),
              hZ = horizontal_part(form, x, y, Z);
  auto dOmega = [&](const Vec<double>& dir) {
    Vec<D1> zd(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) zd[i] = D1(z[i], dir[i]);
    std::vector<Mat<D1>> O = curvature_two_form(form, zd);
    std::vector<Mat<double>> out;
    for (const auto& M : O) out.push_back(derivative_part(M));
    return out;
  };
  auto OX = dOmega(hX), OY = dOmega(hY), OZ = dOmega(hZ);
  Vec<double> r(n);
  for (std::size_t i = 0; i < n; ++i)
    r[i] = (bilinear(OX[i], hY, hZ) + bilinear(OY[i], hZ, hX) + bilinear(OZ[i], hX, hY)) / 3.0;
  return max_abs(r);
}

// ---------------------------------------------------------------------------

LocalConnectionForm glue_connections(const Loop& L, std::vector<GluePiece> pieces,
                                     const std::vector<Vec<double>>& probes) {
  if (pieces.empty()) throw LoopError(ErrorKind::PartitionInvalid, "no pieces to glue");
  for (const auto& p : pieces)
    if (!p.weight || p.weight->dim() != 1 || !p.potential)
      throw LoopError(ErrorKind::PartitionInvalid, "each piece needs a scalar weight and a potential");
  for (const auto& x : probes) {
    double sum = 0.0;
    for (const auto& p : pieces) {
      double w = p.weight->eval(x)[0];
      if (!p.support(x) && std::abs(w) > 1e-10)
        throw LoopError(ErrorKind::PartitionInvalid, "weight does not vanish outside its chart");
      sum += w;
    }
    if (!(std::abs(sum - 1.0) <= 1e-10)) throw LoopError(ErrorKind::PartitionInvalid, "weights do not sum to 1");
  }
  return {L, std::make_shared<GluedPotential>(std::move(pieces))};
}

double vertical_reproduction_residual(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y) {
  const std::size_t n = form.fiber.dim();
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    Vec<double> u = unit_vector(n, k);
    worst = checked_max(worst, max_abs(omega_apply(form, x, y, vertical_vector(form, x, y, u)) - u));
  }
  return worst;
}

double right_equivariance_residual(const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y,
                                   const Vec<double>& a) {
  const std::size_t n = form.fiber.dim(), m = form.A->base_dim();
  const Loop& L = form.fiber;
  Vec<double> ya = L.product(y, a);
  Mat<double> Jr = right_translation_jacobian(L, a, y);
  Mat<double> adinv = ad_inverse_differential(L, a, y);
  double worst = 0.0;
  for (std::size_t k = 0; k < m + n; ++k) {
    Vec<double> X = unit_vector(m + n, k);
    Vec<double> pushed(X.begin(), X.begin() + m);
    Vec<double> tail = Jr * Vec<double>(X.begin() + m, X.end());
    pushed.insert(pushed.end(), tail.begin(), tail.end());
    Vec<double> lhs = omega_apply(form, x, ya, pushed);
    Vec<double> rhs = adinv * omega_apply(form, x, y, X);
    worst = checked_max(worst, max_abs(lhs - rhs));
  }
  return worst;
}

}  // namespace loopbundle
