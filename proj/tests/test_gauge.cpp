#include <doctest.h>

#include <complex>
#include <numbers>

#include "loopbundle/bundle.hpp"
#include "loopbundle/gauge.hpp"
#include "testing.hpp"

using namespace loopbundle;
using cd = std::complex<double>;
using std::numbers::pi;
using testing::kind_of;
using testing::to_c;
using testing::to_v;

namespace {

cd qc_mul(cd a, cd b) { return (a + b) / (1.0 - std::conj(a) * b); }

Mat<double> qc_right_frame(const Vec<double>& y) {
  cd y2 = to_c(y) * to_c(y);
  Mat<double> R(2, 2);
  R(0, 0) = 1 + y2.real();
  R(0, 1) = y2.imag();
  R(1, 0) = y2.imag();
  R(1, 1) = 1 - y2.real();
  return R;
}

// C̄(p, i, j): bracket of the hand right frame by central differences.
Tensor3<double> fd_right_structure(const Vec<double>& y, double h = 1e-6) {
  Mat<double> R = qc_right_frame(y), Rinv = inverse(R);
  std::vector<Mat<double>> dR;
  for (std::size_t m = 0; m < 2; ++m) {
    Vec<double> p = y, q = y;
    p[m] += h;
    q[m] -= h;
    Mat<double> d = qc_right_frame(p) - qc_right_frame(q);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) d(i, j) /= 2 * h;
    dR.push_back(d);
  }
  Tensor3<double> C(2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      Vec<double> br(2, 0.0);
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t m = 0; m < 2; ++m) br[k] += R(m, i) * dR[m](k, j) - R(m, j) * dR[m](k, i);
      Vec<double> c = Rinv * br;
      for (std::size_t p = 0; p < 2; ++p) C(p, i, j) = c[p];
    }
  return C;
}

Quadratic constant(double c, std::size_t m) { return {c, Vec<double>(m, 0.0), Mat<double>(m, m)}; }
Quadratic linear(Vec<double> c1) {
  std::size_t m = c1.size();
  return {0.0, std::move(c1), Mat<double>(m, m)};
}

PotentialPtr constant_potential(const Mat<double>& A) {
  std::vector<Quadratic> comps;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t mu = 0; mu < A.cols(); ++mu) comps.push_back(constant(A(i, mu), A.cols()));
  return std::make_shared<PolynomialPotential>(A.rows(), A.cols(), comps);
}

Mat<double> random_mat(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  Mat<double> M(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) M(i, j) = uniform(rng, -1, 1);
  return M;
}

Vec<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  Vec<double> v(n);
  for (auto& x : v) x = uniform(rng, -1, 1);
  return v;
}

FieldPtr phase_transition(double g0, double g1, double g2, std::size_t m, double modulus = 1.0) {
  Mat<double> c2(m, m);
  c2(0, 0) = g2;
  Vec<double> c1(m, 0.0);
  c1[m - 1] = g1;
  return std::make_shared<PhaseField>(constant(modulus, m), Quadratic{g0, c1, c2});
}

}  // namespace

TEST_CASE("connection matrix: [A | I] on the section and for abelian fibers") {
  auto rng = rng_for(1, 0);
  for (const char* name : {"qc", "qh2", "qsu2", "qhr:K=4"}) {
    Loop L = parse_loop(name);
    LocalConnectionForm form{L, random_polynomial_potential(L.dim(), 2, rng())};
    Vec<double> x = random_vec(rng, 2);
    Mat<double> W = connection_matrix(form, join(x, L.identity()));
    Mat<double> A = form.A->eval(x);
    for (std::size_t i = 0; i < L.dim(); ++i) {
      for (std::size_t mu = 0; mu < 2; ++mu) CHECK(std::abs(W(i, mu) - A(i, mu)) < 1e-14);
      for (std::size_t j = 0; j < L.dim(); ++j) CHECK(std::abs(W(i, 2 + j) - (i == j ? 1.0 : 0.0)) < 1e-14);
    }
  }
  Loop ab = parse_loop("qhr:K=0");
  LocalConnectionForm form{ab, random_polynomial_potential(4, 3, 7)};
  Vec<double> x = random_vec(rng, 3), y = ab.sample(rng);
  Mat<double> W = connection_matrix(form, join(x, y)), A = form.A->eval(x);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t mu = 0; mu < 3; ++mu) CHECK(std::abs(W(i, mu) - A(i, mu)) < 1e-14);
}

TEST_CASE("covariant derivative: zero potential and the hand right frame") {
  Loop qc = parse_loop("qc");
  auto rng = rng_for(2, 0);
  TestFunction f = TestFunction::random(2, 2, 5);
  LocalConnectionForm zero{qc, constant_potential(Mat<double>(2, 2))};
  const double h = 1e-6;
  for (int k = 0; k < 20; ++k) {
    Vec<double> x = random_vec(rng, 2), y = qc.sample(rng);
    for (std::size_t mu = 0; mu < 2; ++mu) {
      Vec<double> xp = x, xm = x;
      xp[mu] += h;
      xm[mu] -= h;
      double fd = (f(xp, y) - f(xm, y)) / (2 * h);
      CHECK(std::abs(covariant_derivative_apply(zero, mu, f, x, y) - fd) < 1e-7);
    }
  }
  // f = d·x + c·y, A constant: D_μ f = d_μ − cᵀ R̄(y) A e_μ
  for (int k = 0; k < 50; ++k) {
    Vec<double> d = random_vec(rng, 2), c = random_vec(rng, 2);
    std::vector<TestFunction::Term> terms{{{1, 0, 0, 0}, d[0]}, {{0, 1, 0, 0}, d[1]},
                                          {{0, 0, 1, 0}, c[0]}, {{0, 0, 0, 1}, c[1]}};
    TestFunction lin(2, 2, terms);
    Mat<double> A = random_mat(rng, 2, 2);
    LocalConnectionForm form{qc, constant_potential(A)};
    Vec<double> x = random_vec(rng, 2), y = qc.sample(rng);
    Mat<double> RA = qc_right_frame(y) * A;
    for (std::size_t mu = 0; mu < 2; ++mu) {
      double want = d[mu] - (c[0] * RA(0, mu) + c[1] * RA(1, mu));
      CHECK(std::abs(covariant_derivative_apply(form, mu, lin, x, y) - want) < 1e-13);
    }
  }
}

TEST_CASE("curvature: constant potential, abelian curl, antisymmetry") {
  Loop qc = parse_loop("qc");
  auto rng = rng_for(3, 0);
  for (int k = 0; k < 100; ++k) {
    Mat<double> A = random_mat(rng, 2, 2);
    LocalConnectionForm form{qc, constant_potential(A)};
    Vec<double> y = qc.sample(rng);
    Curvature F = curvature(form, random_vec(rng, 2), y);
    Tensor3<double> C = fd_right_structure(y);
    for (std::size_t i = 0; i < 2; ++i) {
      double want = 0.0;
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t p = 0; p < 2; ++p) want -= A(j, 0) * A(p, 1) * C(i, j, p);
      CHECK(std::abs(F(i, 0, 1) - want) < 1e-7);
    }
  }
  Loop ab = parse_loop("qhr:K=0");
  std::vector<Quadratic> comps(8, constant(0.0, 2));
  comps[0 * 2 + 1] = linear({1.0, 0.0});  // A^0_1 = x0
  comps[1 * 2 + 0] = linear({0.0, 1.0});  // A^1_0 = x1
  LocalConnectionForm curl{ab, std::make_shared<PolynomialPotential>(4, 2, comps)};
  Curvature F = curvature(curl, {0.3, -0.2}, ab.sample(rng));
  CHECK(F(0, 0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(F(1, 0, 1) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(F(2, 0, 1) == 0.0);

  for (const auto& name : catalog_names()) {
    Loop L = parse_loop(name);
    LocalConnectionForm form{L, random_polynomial_potential(L.dim(), 3, rng())};
    Curvature G = curvature(form, random_vec(rng, 3), L.sample(rng));
    for (std::size_t i = 0; i < L.dim(); ++i)
      for (std::size_t mu = 0; mu < 3; ++mu) {
        CHECK(G(i, mu, mu) == 0.0);
        for (std::size_t nu = 0; nu < 3; ++nu) CHECK(G(i, mu, nu) == -G(i, nu, mu));
      }
  }
}

TEST_CASE("property: [D_μ, D_ν] = −F^i_μν L̄_i and ω kills horizontal lifts") {
  auto rng = rng_for(4, 0);
  Loop qc = parse_loop("qc");
  LocalConnectionForm zero{qc, constant_potential(Mat<double>(2, 2))};
  CHECK(commutator_residual(zero, TestFunction::random(2, 2, 3), {0.1, 0.2}, {0.3, 0.1}) < 1e-14);
  Loop ab = parse_loop("qhr:K=0");
  for (int k = 0; k < 20; ++k) {
    LocalConnectionForm form{ab, random_polynomial_potential(4, 2, rng())};
    CHECK(commutator_residual(form, TestFunction::random(2, 4, rng()), random_vec(rng, 2), ab.sample(rng)) < 1e-8);
  }
  for (int k = 0; k < 100; ++k) {
    LocalConnectionForm form{qc, random_polynomial_potential(2, 2, rng())};
    Vec<double> x = random_vec(rng, 2), y = qc.sample(rng);
    CHECK(commutator_residual(form, TestFunction::random(2, 2, rng()), x, y) < 1e-6);
    CHECK(omega_annihilates_D_residual(form, x, y) < 1e-8);
    CHECK(vertical_reproduction_residual(form, x, y) < 1e-12);
    Vec<double> X = random_vec(rng, 4);
    CHECK(max_abs(omega_apply(form, x, y, horizontal_part(form, x, y, X))) < 1e-12);
  }
}

TEST_CASE("gauge transformation: trivial and constant transitions") {
  Loop qc = parse_loop("qc");
  auto rng = rng_for(5, 0);
  LocalConnectionForm form{qc, random_polynomial_potential(2, 2, 11)};
  auto e = std::make_shared<ConstantField>(qc.identity());
  LocalConnectionForm same = gauge_transform(form, e, e);
  Vec<double> x = random_vec(rng, 2);
  CHECK(max_abs(same.A->eval(x) - form.A->eval(x)) < 1e-15);

  // q_αβ = q, q_βα = e/q = −q: A_β = J A with J the differential of c ↦ ((−q)·c)·q at 0.
  for (int k = 0; k < 20; ++k) {
    cd q = to_c(qc.sample(rng));
    LocalConnectionForm moved =
        gauge_transform(form, std::make_shared<ConstantField>(to_v(q)), std::make_shared<ConstantField>(to_v(-q)));
    const double h = 1e-6;
    Mat<double> J(2, 2);
    for (std::size_t j = 0; j < 2; ++j) {
      cd dc = j == 0 ? cd(h, 0) : cd(0, h);
      cd d = (qc_mul(qc_mul(-q, dc), q) - qc_mul(qc_mul(-q, -dc), q)) / (2 * h);
      J(0, j) = d.real();
      J(1, j) = d.imag();
    }
    Vec<double> x1 = random_vec(rng, 2);
    CHECK(max_abs(moved.A->eval(x1) - J * form.A->eval(x1)) < 1e-8);
  }
}

TEST_CASE("curvature gauge law") {
  Loop qc = parse_loop("qc");
  auto rng = rng_for(6, 0);
  auto e = std::make_shared<ConstantField>(qc.identity());
  for (int k = 0; k < 10; ++k) {
    LocalConnectionForm form{qc, random_polynomial_potential(2, 2, rng())};
    CHECK(curvature_gauge_residual(form, e, e, random_vec(rng, 2), qc.sample(rng)) < 1e-12);
  }

  Loop ab = parse_loop("qhr:K=0");
  std::vector<Quadratic> qc4;
  for (int i = 0; i < 4; ++i) qc4.push_back(Quadratic::random(2, rng, 0.4));
  FieldPtr q_ab = std::make_shared<PolynomialField>(qc4);
  FieldPtr q_ba = std::make_shared<RightInverseField>(ab, q_ab);
  for (int k = 0; k < 10; ++k) {
    LocalConnectionForm form{ab, random_polynomial_potential(4, 2, rng())};
    Vec<double> x = random_vec(rng, 2);
    CHECK(curvature_gauge_residual(form, q_ab, q_ba, x, ab.sample(rng)) < 1e-8);
    CHECK(gauge_two_route_residual(form, q_ab, q_ba, x) < 1e-10);
  }

  // S³ transition e^{i g(ψ)} on the section.
  FieldPtr s_ba = phase_transition(0.3, 0.7, 0.2, 1);
  FieldPtr s_ab = std::make_shared<RightInverseField>(qc, s_ba);
  for (int k = 0; k < 20; ++k) {
    LocalConnectionForm form{qc, random_trig_potential(2, 1, rng())};
    CHECK(curvature_gauge_residual(form, s_ab, s_ba, {uniform(rng, 0.1, 3.0)}, qc.identity()) < 1e-5);
  }
}

// The local transformation rule and the pullback of the connection rebuilt on
// U × Q disagree for Qℂ with a unit-modulus transition; see the notes on
// condition (ii). Kept as an expected failure so a change in either route shows up.
TEST_CASE("two transformation routes agree on the S³ transition" * doctest::should_fail()) {
  Loop qc = parse_loop("qc");
  FieldPtr s_ba = phase_transition(0.3, 0.7, 0.2, 1);
  FieldPtr s_ab = std::make_shared<RightInverseField>(qc, s_ba);
  LocalConnectionForm form{qc, random_trig_potential(2, 1, 21)};
  CHECK(gauge_two_route_residual(form, s_ab, s_ba, {1.1}) < 1e-6);
}

TEST_CASE("curvature gauge law: generic transitions and points off the section") {
  Loop qc = parse_loop("qc");
  auto rng = rng_for(7, 0);
  std::vector<Quadratic> comps{Quadratic::random(2, rng, 0.3), Quadratic::random(2, rng, 0.3)};
  FieldPtr g_ab = std::make_shared<PolynomialField>(comps);
  FieldPtr g_ba = std::make_shared<RightInverseField>(qc, g_ab);
  FieldPtr w_ba = phase_transition(0.0, 1.0, 0.0, 2, std::tan(kClutchAngle / 2));
  FieldPtr w_ab = std::make_shared<RightInverseField>(qc, w_ba);
  double generic = 0.0, off = 0.0, on = 0.0;
  for (int k = 0; k < 20; ++k) {
    LocalConnectionForm form{qc, random_polynomial_potential(2, 2, rng())};
    Vec<double> x = random_vec(rng, 2);
    generic = std::max(generic, curvature_gauge_residual(form, g_ab, g_ba, x, qc.identity()));
    off = std::max(off, curvature_gauge_residual(form, w_ab, w_ba, x, qc.sample(rng)));
    on = std::max(on, curvature_gauge_residual(form, w_ab, w_ba, x, qc.identity()));
  }
  MESSAGE("generic modulus " << generic << ", off the section " << off << ", on the section " << on);
  // dθ ≠ 0 once |q| varies on a 2D base; A∧A·C̄(y) breaks the law at y ≠ e.
  CHECK(generic > 1e-4);
  CHECK(off > 1e-4);
  CHECK(on < 1e-5);
}

TEST_CASE("gluing") {
  Loop qc = parse_loop("qc");
  BundleAtlas atlas = make_s3_bundle();
  const BaseChart& minus = atlas.chart("-");
  const BaseChart& plus = atlas.chart("+");
  std::vector<Vec<double>> probes;
  for (int k = 0; k <= 16; ++k) probes.push_back({-pi + k * pi / 8});
  PotentialPtr A = random_trig_potential(2, 1, 31);
  auto all = [](const Vec<double>&) { return true; };

  std::vector<GluePiece> bad_sum{{minus.contains, std::make_shared<CosineField>(0.5, 0.5), A},
                                 {plus.contains, std::make_shared<CosineField>(0.6, -0.5), A}};
  CHECK(kind_of([&] { glue_connections(qc, bad_sum, probes); }) == ErrorKind::PartitionInvalid);
  std::vector<GluePiece> off_chart{{minus.contains, std::make_shared<CosineField>(1.0, 0.0), A},
                                   {plus.contains, std::make_shared<CosineField>(0.0, 0.0), A}};
  CHECK(kind_of([&] { glue_connections(qc, off_chart, probes); }) == ErrorKind::PartitionInvalid);

  auto rng = rng_for(8, 0);
  LocalConnectionForm single = glue_connections(qc, {{all, std::make_shared<CosineField>(1.0, 0.0), A}}, probes);
  std::vector<GluePiece> twin{{minus.contains, std::make_shared<CosineField>(0.5, 0.5), A},
                              {plus.contains, std::make_shared<CosineField>(0.5, -0.5), A}};
  LocalConnectionForm doubled = glue_connections(qc, twin, probes);
  for (int k = 0; k < 50; ++k) {
    Vec<double> psi{uniform(rng, 0.05, pi - 0.05)};
    CHECK(max_abs(single.A->eval(psi) - A->eval(psi)) < 1e-15);
    CHECK(max_abs(doubled.A->eval(psi) - A->eval(psi)) < 1e-14);
    CHECK(vertical_reproduction_residual(doubled, psi, qc.sample(rng)) < 1e-8);
  }
}

TEST_CASE("structure equation split by vector type") {
  auto rng = rng_for(9, 0);
  Loop ab = parse_loop("qhr:K=0");
  for (int k = 0; k < 20; ++k) {
    LocalConnectionForm form{ab, random_polynomial_potential(4, 2, rng())};
    Vec<double> x = random_vec(rng, 2), y = ab.sample(rng);
    Vec<double> H = horizontal_lift(form, x, y, random_vec(rng, 2));
    Vec<double> H2 = horizontal_lift(form, x, y, random_vec(rng, 2));
    Vec<double> V = vertical_vector(form, x, y, random_vec(rng, 4));
    Vec<double> V2 = vertical_vector(form, x, y, random_vec(rng, 4));
    CHECK(structure_equation_residual(form, x, y, H, H2) < 1e-6);
    CHECK(structure_equation_residual(form, x, y, V, V2) < 1e-6);
    CHECK(structure_equation_residual(form, x, y, H, V) < 1e-6);
  }
  Loop qc = parse_loop("qc");
  const Vec<double> e = qc.identity();
  double mixed = 0.0;
  for (int k = 0; k < 20; ++k) {
    LocalConnectionForm form{qc, random_polynomial_potential(2, 2, rng())};
    Vec<double> x = random_vec(rng, 2), y = qc.sample(rng);
    auto H = [&](const Vec<double>& at) { return horizontal_lift(form, x, at, random_vec(rng, 2)); };
    auto V = [&](const Vec<double>& at) { return vertical_vector(form, x, at, random_vec(rng, 2)); };
    CHECK(structure_equation_residual(form, x, e, H(e), H(e)) < 1e-5);
    CHECK(structure_equation_residual(form, x, e, V(e), V(e)) < 1e-5);
    CHECK(structure_equation_residual(form, x, e, H(e), V(e)) < 1e-5);
    CHECK(structure_equation_residual(form, x, y, H(y), H(y)) < 1e-5);
    CHECK(structure_equation_residual(form, x, y, V(y), V(y)) < 1e-5);
    CHECK(horizontal_bracket_residual(form, x, y) < 1e-5);
    mixed = std::max(mixed, structure_equation_residual(form, x, y, H(y), V(y)));
  }
  MESSAGE("mixed pair off the section: " << mixed);
  // The coordinate form is not right equivariant for a nonassociative fiber.
  CHECK(mixed > 1e-3);
}

TEST_CASE("Bianchi identity on horizontal triples") {
  auto rng = rng_for(10, 0);
  Loop qc = parse_loop("qc"), ab = parse_loop("qhr:K=0");
  for (int k = 0; k < 5; ++k) {
    LocalConnectionForm flat{qc, random_polynomial_potential(2, 2, rng())};
    CHECK(bianchi_residual(flat, random_vec(rng, 2), qc.sample(rng), random_vec(rng, 4), random_vec(rng, 4),
                           random_vec(rng, 4)) < 1e-8);
    LocalConnectionForm a3{ab, random_polynomial_potential(4, 3, rng())};
    CHECK(bianchi_residual(a3, random_vec(rng, 3), ab.sample(rng), random_vec(rng, 7), random_vec(rng, 7),
                           random_vec(rng, 7)) < 1e-6);
  }
  double off = 0.0;
  for (int k = 0; k < 10; ++k) {
    LocalConnectionForm form{qc, random_polynomial_potential(2, 3, rng())};
    Vec<double> x = random_vec(rng, 3), X = random_vec(rng, 5), Y = random_vec(rng, 5), Z = random_vec(rng, 5);
    CHECK(bianchi_residual(form, x, qc.identity(), X, Y, Z) < 1e-4);
    off = std::max(off, bianchi_residual(form, x, qc.sample(rng), X, Y, Z));
  }
  MESSAGE("Bianchi off the section: " << off);
  CHECK(off > 1e-4);
}

TEST_CASE("right equivariance holds on abelian fibers only") {
  auto rng = rng_for(11, 0);
  Loop ab = parse_loop("qhr:K=0"), qc = parse_loop("qc");
  LocalConnectionForm fa{ab, random_polynomial_potential(4, 2, 3)};
  LocalConnectionForm fq{qc, random_polynomial_potential(2, 2, 3)};
  double q = 0.0;
  for (int k = 0; k < 10; ++k) {
    Vec<double> x = random_vec(rng, 2);
    CHECK(right_equivariance_residual(fa, x, ab.sample(rng), ab.sample(rng)) < 1e-12);
    q = std::max(q, right_equivariance_residual(fq, x, qc.sample(rng), qc.sample(rng)));
  }
  CHECK(q > 1e-3);
}
