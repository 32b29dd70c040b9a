#include <doctest.h>

#include <complex>

#include "loopbundle/tangent.hpp"
#include "testing.hpp"

using namespace loopbundle;
using cd = std::complex<double>;
using testing::kind_of;
using testing::to_c;
using testing::to_v;

namespace {

// Right frame of Qℂ (σ = 1) or QH² (σ = −1): d(a·y)/da at a = 0 is da + σ y² dā.
Mat<double> disk_right_frame(double sigma, cd y) {
  cd y2 = sigma * y * y;
  Mat<double> R(2, 2);
  R(0, 0) = 1 + y2.real();
  R(0, 1) = y2.imag();
  R(1, 0) = y2.imag();
  R(1, 1) = 1 - y2.real();
  return R;
}

Mat<double> scaled_identity(std::size_t n, double s) {
  Mat<double> I = Mat<double>::identity(n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = s;
  return I;
}

// Bracket coefficients of a frame field by central differences of the frame.
template <class Frame>
Tensor3<double> fd_structure(Frame&& frame, const Vec<double>& a, double h = 1e-6) {
  const std::size_t n = a.size();
  Mat<double> R = frame(a);
  std::vector<Mat<double>> dR;
  for (std::size_t m = 0; m < n; ++m) {
    Vec<double> p = a, q = a;
    p[m] += h;
    q[m] -= h;
    Mat<double> d = frame(p) - frame(q);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d(i, j) /= 2 * h;
    dR.push_back(d);
  }
  Mat<double> Rinv = inverse(R);
  Tensor3<double> C(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Vec<double> br(n, 0.0);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t m = 0; m < n; ++m) br[k] += R(m, i) * dR[m](k, j) - R(m, j) * dR[m](k, i);
      Vec<double> c = Rinv * br;
      for (std::size_t p = 0; p < n; ++p) C(p, i, j) = c[p];
    }
  return C;
}

// (C¹₁₂, C²₁₂) in the complex basis Γ₁ = ∂_η-type, Γ₂ = ∂_η̄-type.
std::pair<cd, cd> to_complex_basis(const Tensor3<double>& C) {
  cd cx(C(0, 0, 1)), cy(C(1, 0, 1));
  cd i(0, 1);
  return {0.5 * i * (cx + i * cy), 0.5 * i * (cx - i * cy)};
}

}  // namespace

TEST_CASE("pushforward of the left translation") {
  Loop qc = parse_loop("qc");
  Vec<double> v = pushforward_left(qc, to_v(0.5), qc.identity(), Vec<double>{1.0, 0.0});
  CHECK(v[0] == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(std::abs(v[1]) < 1e-15);
  for (const auto& name : catalog_names()) {
    Loop L = parse_loop(name);
    auto rng = rng_for(1, 0);
    Vec<double> b = L.sample(rng), w = L.sample(rng);
    CHECK(max_abs(pushforward_left(L, L.identity(), b, w) - w) < 1e-14);
  }
}

TEST_CASE("property: dual-number pushforward matches central differences") {
  const double h = 1e-5;
  for (const auto& name : catalog_names()) {
    Loop L = parse_loop(name);
    INFO(name);
    for (int k = 0; k < 100; ++k) {
      auto rng = rng_for(2, k);
      Vec<double> a = L.sample(rng), b = L.sample(rng), v(L.dim());
      for (auto& x : v) x = uniform(rng, -1, 1);
      Vec<double> jv = pushforward_left(L, a, b, v);
      Vec<double> fd = scaled(L.difference(L.product(a, b + scaled(v, h)), L.product(a, b - scaled(v, h))), 0.5 / h);
      CHECK(max_abs(fd - jv) < 1e-8);
    }
  }
}

TEST_CASE("frames of the disk loops against hand Jacobians") {
  Loop qc = parse_loop("qc"), qh2 = parse_loop("qh2");
  auto rng = rng_for(3, 0);
  for (int k = 0; k < 200; ++k) {
    cd y = to_c(qc.sample(rng));
    double r2 = std::norm(y);
    CHECK(max_abs(left_frame(qc, to_v(y)) - scaled_identity(2, 1 + r2)) < 1e-14);
    CHECK(max_abs(left_frame(qh2, to_v(y)) - scaled_identity(2, 1 - r2)) < 1e-14);
    CHECK(max_abs(right_frame(qc, to_v(y)) - disk_right_frame(1, y)) < 1e-14);
    CHECK(max_abs(right_frame(qh2, to_v(y)) - disk_right_frame(-1, y)) < 1e-14);
  }
  for (const auto& name : catalog_names()) {
    Loop L = parse_loop(name);
    CHECK(max_abs(left_frame(L, L.identity()) - Mat<double>::identity(L.dim())) < 1e-15);
    CHECK(max_abs(right_frame(L, L.identity()) - Mat<double>::identity(L.dim())) < 1e-15);
  }
  Loop ab = parse_loop("qhr:K=0");
  auto r2 = rng_for(4, 0);
  CHECK(max_abs(right_frame(ab, ab.sample(r2)) - Mat<double>::identity(4)) < 1e-15);
}

TEST_CASE("structure functions: Qℂ and QH² closed forms in the complex basis") {
  Loop qc = parse_loop("qc"), qh2 = parse_loop("qh2");
  auto [c1, c2] = to_complex_basis(structure_functions(qc, to_v(cd(0.3, 0.4))));
  CHECK(std::abs(c1 - cd(-0.3, -0.4)) < 1e-12);
  CHECK(std::abs(c2 - cd(0.3, -0.4)) < 1e-12);
  auto rng = rng_for(5, 0);
  for (int k = 0; k < 1000; ++k) {
    cd eta = to_c(qc.sample(rng));
    auto [a1, a2] = to_complex_basis(structure_functions(qc, to_v(eta)));
    CHECK(std::abs(a1 + eta) < 1e-8);
    CHECK(std::abs(a2 - std::conj(eta)) < 1e-8);
    // QH²: [Γ₁, Γ₂] = η Γ₁ − η̄ Γ₂
    auto [b1, b2] = to_complex_basis(structure_functions(qh2, to_v(eta)));
    CHECK(std::abs(b1 - eta) < 1e-8);
    CHECK(std::abs(b2 + std::conj(eta)) < 1e-8);
  }
}

TEST_CASE("structure functions against finite differences of the frame, both sides") {
  for (const auto& name : catalog_names()) {
    Loop L = parse_loop(name);
    INFO(name);
    auto rng = rng_for(6, 0);
    for (int k = 0; k < 10; ++k) {
      Vec<double> a = L.sample(rng);
      for (FrameSide side : {FrameSide::left, FrameSide::right}) {
        Tensor3<double> C = structure_functions(L, a, side);
        Tensor3<double> F = fd_structure([&](const Vec<double>& p) { return frame(L, side, p); }, a);
        double d = 0.0, anti = 0.0;
        for (std::size_t t = 0; t < C.data.size(); ++t) d = std::max(d, std::abs(C.data[t] - F.data[t]));
        for (std::size_t p = 0; p < C.n; ++p)
          for (std::size_t i = 0; i < C.n; ++i)
            for (std::size_t j = 0; j < C.n; ++j) anti = std::max(anti, std::abs(C(p, i, j) + C(p, j, i)));
        CHECK(d < 1e-7);
        CHECK(anti == 0.0);
      }
    }
  }
  Loop ab = parse_loop("qhr:K=0");
  auto rng = rng_for(7, 0);
  Tensor3<double> C0 = structure_functions(ab, ab.sample(rng));
  CHECK(max_abs(C0.data) == 0.0);
}

TEST_CASE("modified Jacobi identity") {
  Loop qc = parse_loop("qc");
  CHECK(jacobi_residual(qc, to_v(cd(0.3, 0.4))) < 1e-6);
  Loop ab = parse_loop("qhr:K=0");
  auto rng = rng_for(8, 0);
  CHECK(jacobi_residual(ab, ab.sample(rng)) < 1e-14);
  for (const auto& name : catalog_names()) {
    Loop L = parse_loop(name);
    for (int k = 0; k < 10; ++k) CHECK(jacobi_residual(L, L.sample(rng)) < 1e-6);
  }
}

TEST_CASE("canonical form inverts the left frame") {
  for (const auto& name : catalog_names()) {
    Loop L = parse_loop(name);
    auto rng = rng_for(9, 0);
    Vec<double> a = L.sample(rng);
    Mat<double> R = left_frame(L, a);
    for (std::size_t i = 0; i < L.dim(); ++i) {
      Vec<double> col(L.dim());
      for (std::size_t k = 0; k < L.dim(); ++k) col[k] = R(k, i);
      CHECK(max_abs(canonical_form(L, a, col) - unit_vector(L.dim(), i)) < 1e-13);
    }
    Vec<double> v = L.sample(rng);
    CHECK(max_abs(canonical_form(L, L.identity(), v) - v) < 1e-15);
  }
}

TEST_CASE("Ad-form transformation laws") {
  for (const auto& name : catalog_names()) {
    Loop L = parse_loop(name);
    INFO(name);
    auto rng = rng_for(10, 0);
    Vec<double> a = L.sample(rng), v = L.sample(rng);
    AdFormResiduals at_e = verify_ad_form_laws(L, L.identity(), a, v);
    // l_(e,a) and Ad⁻¹_e(a) are the identity map; their dual-number
    // differentials round at the last bit for the closed-form divisions.
    CHECK(at_e.left < 1e-15);
    CHECK(at_e.right < 1e-15);
    for (int k = 0; k < 200; ++k) {
      Vec<double> b = L.sample(rng), a2 = L.sample(rng), w = L.sample(rng);
      AdFormResiduals r = verify_ad_form_laws(L, b, a2, w);
      CHECK(r.left < 1e-8);
      CHECK(r.right < 1e-8);
      CHECK(r.adjoint < 1e-8);
    }
  }
}

TEST_CASE("Ad differentials are mutually inverse and trivial at the identity") {
  for (const auto& name : catalog_names()) {
    Loop L = parse_loop(name);
    auto rng = rng_for(11, 0);
    Vec<double> a = L.sample(rng), b = L.sample(rng);
    Mat<double> I = Mat<double>::identity(L.dim());
    CHECK(max_abs(ad_differential(L, b, a) * ad_inverse_differential(L, b, a) - I) < 1e-11);
    CHECK(max_abs(ad_differential(L, L.identity(), a) - I) < 1e-13);
    CHECK(max_abs(associator_differential(L, AssociatorKind::left, L.identity(), b) - I) < 1e-13);
  }
}

TEST_CASE("ill-conditioned frames warn, singular frames throw") {
  Loop qc = parse_loop("qc");
  std::vector<std::string> seen;
  set_warning_handler([&](const std::string& m) { seen.push_back(m); });
  double r = std::sqrt(1.0 - 1e-10);
  CHECK_NOTHROW(inverse_frame(right_frame(qc, Vec<double>{r, 0.0})));
  CHECK(seen.size() == 1);
  CHECK(kind_of([&] { inverse_frame(right_frame(qc, Vec<double>{1.0, 0.0})); }) == ErrorKind::SingularFrame);
  set_warning_handler({});
  CHECK_NOTHROW(inverse_frame(right_frame(qc, Vec<double>{r, 0.0})));
  CHECK(seen.size() == 1);
}
