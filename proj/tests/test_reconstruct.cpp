#include <doctest.h>

#include <cmath>
#include <complex>

#include "loopbundle/reconstruct.hpp"
#include "testing.hpp"

using namespace loopbundle;
using cd = std::complex<double>;
using testing::kind_of;
using testing::to_c;
using testing::to_v;

TEST_CASE("Lie equation from the identity reproduces b") {
  for (const auto& name : catalog_names()) {
    Loop L = parse_loop(name);
    auto rng = rng_for(1, 0);
    Vec<double> b = L.sample(rng);
    ReconstructResult r = reconstruct_product(L, L.identity(), b);
    CHECK(L.distance(r.value, b) < 1e-10);
  }
}

TEST_CASE("Qℂ benchmark: 0.5 times 0.5") {
  Loop L = parse_loop("qc");
  ReconstructResult r = reconstruct_product(L, to_v(0.5), to_v(0.5));
  CHECK(std::abs(to_c(r.value) - 4.0 / 3.0) < 1e-6);
  CHECK(r.error_estimate < 1e-6);
}

TEST_CASE("QH² reconstruction against (z + w)/(1 + z̄w)") {
  Loop L = parse_loop("qh2");
  auto rng = rng_for(2, 0);
  for (int k = 0; k < 20; ++k) {
    cd a = to_c(L.sample(rng, 0.5)), b = to_c(L.sample(rng, 0.5));
    ReconstructResult r = reconstruct_product(L, to_v(a), to_v(b));
    CHECK(std::abs(to_c(r.value) - (a + b) / (1.0 + std::conj(a) * b)) < 1e-6);
  }
}

TEST_CASE("RK4 order under step halving") {
  for (const char* name : {"qc", "qh2"}) {
    Loop L = parse_loop(name);
    Vec<double> a{0.5, 0.0}, b{0.0, 0.5};
    Vec<double> exact = L.product(a, b);
    double e16 = L.distance(integrate_lie_equation(L, a, b, 16), exact);
    double e32 = L.distance(integrate_lie_equation(L, a, b, 32), exact);
    double e64 = L.distance(integrate_lie_equation(L, a, b, 64), exact);
    INFO(name << " errors " << e16 << " " << e32 << " " << e64);
    CHECK(std::abs(std::log2(e16 / e32) - 4.0) < 1.2);
    CHECK(std::abs(std::log2(e32 / e64) - 4.0) < 1.2);
  }
}

TEST_CASE("path independence: quadratic path gives the same endpoint") {
  for (const char* name : {"qc", "qh2", "qsu2", "qhr:K=4"}) {
    Loop L = parse_loop(name);
    auto rng = rng_for(3, 0);
    Vec<double> a = L.sample(rng), b = L.sample(rng);
    CHECK(L.distance(integrate_lie_equation(L, a, b, 256, PathKind::bezier),
                     integrate_lie_equation(L, a, b, 256, PathKind::ray)) < 1e-8);
  }
}

TEST_CASE("too few steps and inaccurate runs raise StepUnderflow") {
  Loop L = parse_loop("qc");
  ReconstructOptions few;
  few.steps = 8;
  CHECK(kind_of([&] { reconstruct_product(L, to_v(0.5), to_v(0.5), few); }) == ErrorKind::StepUnderflow);
  ReconstructOptions strict;
  strict.steps = 16;
  strict.tol = 1e-16;
  CHECK(kind_of([&] { reconstruct_product(L, to_v(0.5), to_v(cd(0, 0.5)), strict); }) == ErrorKind::StepUnderflow);
}

TEST_CASE("generalized Maurer–Cartan residual") {
  Loop ab = parse_loop("qhr:K=0");
  auto rng = rng_for(4, 0);
  CHECK(maurer_cartan_residual(ab, ab.sample(rng), ab.sample(rng)) < 1e-14);
  Mat<double> lam = maurer_cartan_lambda(ab, ab.sample(rng), ab.sample(rng));
  CHECK(max_abs(lam - Mat<double>::identity(4)) < 1e-15);
  for (const auto& name : catalog_names()) {
    Loop L = parse_loop(name);
    INFO(name);
    CHECK(maurer_cartan_residual(L, L.identity(), L.sample(rng)) < 1e-8);
    for (int k = 0; k < 20; ++k) CHECK(maurer_cartan_residual(L, L.sample(rng), L.sample(rng)) < 1e-6);
  }
  Loop qc = parse_loop("qc");
  Mat<double> at_e = maurer_cartan_lambda(qc, qc.sample(rng), qc.identity());
  CHECK(max_abs(at_e - Mat<double>::identity(2)) < 1e-15);
}

TEST_CASE("transformation quasigroup axioms") {
  for (const auto& name : catalog_names()) {
    Loop L = parse_loop(name);
    INFO(name);
    auto rng = rng_for(5, 0);
    Vec<double> b = L.sample(rng), c = L.sample(rng);
    VerificationReport at_e = batalin_axiom_check(L, L.identity(), b, c);
    for (const auto& cr : at_e.cases) CHECK(cr.max_residual < 1e-13);
    for (int k = 0; k < 20; ++k) {
      VerificationReport rep = batalin_axiom_check(L, L.sample(rng), L.sample(rng), L.sample(rng));
      CHECK(rep.all_pass());
    }
  }
}
