#include "loopbundle/reconstruct.hpp"

#include <algorithm>

namespace loopbundle {

namespace {

struct PathPoint {
  Vec<double> b;
  Vec<double> db;
};

PathPoint path_at(PathKind kind, const Vec<double>& b, double t) {
  const std::size_t n = b.size();
  if (kind == PathKind::ray) return {scaled(b, t), b};
  Vec<double> m = scaled(b, 0.5);
  if (n >= 2) {
    m[0] -= 0.25 * b[1];
    m[1] += 0.25 * b[0];
  } else {
    m = scaled(b, 0.75);
  }
  PathPoint p{Vec<double>(n), Vec<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    p.b[i] = 2.0 * t * (1.0 - t) * m[i] + t * t * b[i];
    p.db[i] = 2.0 * (1.0 - 2.0 * t) * m[i] + 2.0 * t * b[i];
  }
  return p;
}

}  // namespace

Vec<double> integrate_lie_equation(const Loop& L, const Vec<double>& a, const Vec<double>& b, int steps,
                                   PathKind path) {
  // On ℝ/ℤ the path must run through the representative of b nearest to e.
  const Vec<double> target = L.is_rz() ? L.difference(b, L.identity()) : b;
  auto rhs = [&](double t, const Vec<double>& phi) {
    PathPoint p = path_at(path, target, t);
    Mat<double> lambda = maurer_cartan_lambda(L, a, p.b);
    return left_frame(L, phi) * (lambda * p.db);
  };
  Vec<double> phi = a;
  const double h = 1.0 / steps;
  for (int k = 0; k < steps; ++k) {
    double t = k * h;
    Vec<double> k1 = rhs(t, phi);
    Vec<double> k2 = rhs(t + 0.5 * h, phi + scaled(k1, 0.5 * h));
    Vec<double> k3 = rhs(t + 0.5 * h, phi + scaled(k2, 0.5 * h));
    Vec<double> k4 = rhs(t + h, phi + scaled(k3, h));
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  if (L.is_rz()) phi[0] -= std::floor(phi[0]);
  return phi;
}

ReconstructResult reconstruct_product(const Loop& L, const Vec<double>& a, const Vec<double>& b,
                                      const ReconstructOptions& opt) {
  if (opt.steps < 16) throw LoopError(ErrorKind::StepUnderflow, "at least 16 RK4 steps are required");
  ReconstructResult r;
  r.value = integrate_lie_equation(L, a, b, opt.steps, opt.path);
  if (opt.tol > 0.0) {
    Vec<double> fine = integrate_lie_equation(L, a, b, 2 * opt.steps, opt.path);
    r.error_estimate = L.distance(r.value, fine) * 16.0 / 15.0;
    if (!(r.error_estimate <= opt.tol))
      throw LoopError(ErrorKind::StepUnderflow,
                      "Richardson estimate " + format_residual(r.error_estimate) + " exceeds tolerance");
  } else {
    r.error_estimate = 0.0;
  }
  return r;
}

double maurer_cartan_residual(const Loop& L, const Vec<double>& b, const Vec<double>& a) {
  const std::size_t n = L.dim();
  Mat<double> lambda;
  std::vector<Mat<double>> dlambda(n);  // dlambda[p] = ∂λ/∂b^p
  for (std::size_t p = 0; p < n; ++p) {
    Vec<D1> bp(n);
    for (std::size_t i = 0; i < n; ++i) bp[i] = D1(b[i], i == p ? 1.0 : 0.0);
    Mat<D1> lam = maurer_cartan_lambda(L, a, bp);
    if (p == 0) lambda = value_part(lam);
    dlambda[p] = derivative_part(lam);
  }
  Tensor3<double> C = structure_functions(L, L.product(a, b));
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t p = 0; p < n; ++p) {
        double r = dlambda[p](i, j) - dlambda[j](i, p);
        for (std::size_t m = 0; m < n; ++m)
          for (std::size_t q = 0; q < n; ++q) r += C(i, m, q) * lambda(m, p) * lambda(q, j);
        worst = std::max(worst, std::abs(r));
      }
  return worst;
}

VerificationReport batalin_axiom_check(const Loop& L, const Vec<double>& a, const Vec<double>& b,
                                       const Vec<double>& c, double tol) {
  VerificationReport rep("batalin");
  const Vec<double> e = L.identity();
  // l⁻¹_(a,b) = L⁻¹_b ∘ L⁻¹_a ∘ L_{a·b}
  auto phi_tilde = [&](const Vec<double>& bb, const Vec<double>& cc, const Vec<double>& aa) {
    Vec<double> linv = L.left_div(bb, L.left_div(aa, L.product(L.product(aa, bb), cc)));
    return L.product(bb, linv);
  };
  double assoc = L.distance(L.product(L.product(a, b), c), L.product(a, phi_tilde(b, c, a)));
  rep.add("modified_associativity", assoc, tol, 1);

  double unit = std::max({L.distance(L.product(a, e), a), L.distance(L.product(e, b), b),
                          L.distance(phi_tilde(b, e, a), b), L.distance(phi_tilde(e, c, a), c),
                          L.distance(phi_tilde(b, c, e), L.product(b, c))});
  rep.add("unit_conditions", unit, tol, 1);

  double inv = std::max(L.distance(L.product(a, L.left_div(a, c)), c), L.distance(L.product(L.right_div(c, a), a), c));
  rep.add("invertibility", inv, tol, 1);
  return rep;
}

}  // namespace loopbundle
