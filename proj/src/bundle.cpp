#include "loopbundle/bundle.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "loopbundle/random.hpp"

namespace loopbundle {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kChartEdge = 1e-12;

Vec<double> unit_phase(const Vec<double>& z, const char* what) {
  double r = std::hypot(z[0], z[1]);
  if (!(r > 1e-12)) throw LoopError(ErrorKind::DomainSingularity, what);
  return {z[0] / r, z[1] / r};
}

bool angle_avoids(double x, double excluded) {
  return std::abs(std::remainder(x - excluded, 2.0 * kPi)) > kChartEdge;
}

Cplx<double> cdiv(const Cplx<double>& a, const Cplx<double>& b) { return a / b; }

}  // namespace

const BaseChart& BundleAtlas::chart(const std::string& id) const {
  for (const auto& c : charts_)
    if (c.id == id) return c;
  throw LoopError(ErrorKind::UnknownKind, "no chart '" + id + "' in " + name_);
}

Vec<double> BundleAtlas::carry(const std::string& from, const std::string& to, const Vec<double>& x,
                               const Vec<double>& fiber) const {
  if (from == to) return fiber;
  auto it = transitions_.find({from, to});
  if (it == transitions_.end()) throw LoopError(ErrorKind::UnknownKind, "no transition " + from + " -> " + to);
  Vec<double> q = it->second.element(x, fiber);
  return it->second.mode == TransitionMode::left ? fiber_.product(q, fiber) : fiber_.left_div(q, fiber);
}

TotalPoint right_action(const BundleAtlas& atlas, const TotalPoint& p, const Vec<double>& a) {
  TotalPoint out = p;
  out.fiber = atlas.fiber().product(p.fiber, a);
  return out;
}

TotalPoint change_chart(const BundleAtlas& atlas, const TotalPoint& p, const std::string& to_chart) {
  if (!atlas.in_overlap(p.chart, to_chart, p.base))
    throw LoopError(ErrorKind::NotInOverlap, "base point not in " + p.chart + " ∩ " + to_chart);
  TotalPoint out = p;
  out.chart = to_chart;
  out.fiber = atlas.carry(p.chart, to_chart, p.base, p.fiber);
  return out;
}

Vec<double> transition_element(const BundleAtlas& atlas, const std::string& alpha, const std::string& beta,
                               const Vec<double>& x, const Vec<double>& q_alpha) {
  TotalPoint pb = change_chart(atlas, TotalPoint{alpha, x, q_alpha}, beta);
  return atlas.fiber().right_div(pb.fiber, q_alpha);
}

double cocycle_residual(const BundleAtlas& atlas, const std::string& alpha, const std::string& beta,
                        const std::string& gamma, const Vec<double>& x, const Vec<double>& q_test) {
  const Loop& L = atlas.fiber();
  const Vec<double>& qa = q_test;
  Vec<double> qb = atlas.carry(alpha, beta, x, qa);
  Vec<double> qg = atlas.carry(alpha, gamma, x, qa);
  Vec<double> q_ba = L.right_div(qb, qa);
  Vec<double> q_ga = L.right_div(qg, qa);
  Vec<double> q_bg = L.right_div(qb, qg);
  Vec<double> lhs = L.product(q_ba, qa);
  // q_βα·q_α = q_βγ·(q_γα·q_α)
  double r1 = L.distance(lhs, L.product(q_bg, L.product(q_ga, qa)));
  // q_βα·q_α = (q_βγ·q_γα)·l_(q_βγ,q_γα) q_α
  Vec<double> l = associator(L, AssociatorKind::left, q_bg, q_ga, qa);
  double r2 = L.distance(lhs, L.product(L.product(q_bg, q_ga), l));
  return std::max(r1, r2);
}

double transition_right_law_residual(const BundleAtlas& atlas, const std::string& alpha, const std::string& beta,
                                     const Vec<double>& x, const Vec<double>& q_alpha, const Vec<double>& a) {
  const Loop& L = atlas.fiber();
  Vec<double> qb = atlas.carry(alpha, beta, x, q_alpha);
  Vec<double> q_ba = L.right_div(qb, q_alpha);
  // q_βα(p·a): both chart coordinates move by R_a.
  Vec<double> lhs = L.right_div(L.product(qb, a), L.product(q_alpha, a));
  Vec<double> rhs = associator(L, AssociatorKind::right, q_alpha, a, q_ba);
  return L.distance(lhs, rhs);
}

// ---------------------------------------------------------------------------

S3Point s3_point(double theta, double psi1, double psi2) {
  return {Cplx<double>(std::cos(theta / 2) * std::cos(psi1), std::cos(theta / 2) * std::sin(psi1)),
          Cplx<double>(std::sin(theta / 2) * std::cos(psi2), std::sin(theta / 2) * std::sin(psi2))};
}

Vec<double> s3_project(const S3Point& p) {
  double r = abs(p.z1);
  if (!(r > 1e-12)) throw LoopError(ErrorKind::ProjectionSingular, "z1 = 0 has no base angle");
  return {p.z1.re / r, p.z1.im / r, 0.0};
}

S3Point s3_right_action(const S3Point& p, const Cplx<double>& eta) {
  if (!(abs(p.z1) > 1e-12)) throw LoopError(ErrorKind::DomainSingularity, "right action needs z1 != 0");
  Cplx<double> zeta = cdiv(p.z2, p.z1);
  Cplx<double> w = Cplx<double>(1.0) - conj(eta) * zeta;
  guard_denominator(abs(w), "S3 right action: 1 - conj(eta) z2/z1 = 0");
  double s = std::sqrt(1.0 + norm2(eta));
  double aw = abs(w);
  return {p.z1 * (aw / s), cdiv((p.z2 + eta * p.z1) * (aw / s), w)};
}

double s3_norm_defect(const S3Point& p) { return std::abs(norm2(p.z1) + norm2(p.z2) - 1.0); }

double s3_distance(const S3Point& a, const S3Point& b) {
  return std::max({std::abs(a.z1.re - b.z1.re), std::abs(a.z1.im - b.z1.im), std::abs(a.z2.re - b.z2.re),
                   std::abs(a.z2.im - b.z2.im)});
}

TotalPoint s3_trivialize(const S3Point& p, const std::string& chart) {
  if (!(abs(p.z1) > 1e-12)) throw LoopError(ErrorKind::ProjectionSingular, "z1 = 0");
  double psi1 = std::atan2(p.z1.im, p.z1.re);
  Vec<double> zm = as_vec(cdiv(p.z2, p.z1));
  if (chart == "-") {
    if (!angle_avoids(psi1, kPi)) throw LoopError(ErrorKind::NotInOverlap, "psi1 = pi is outside U-");
    return {"-", {psi1}, zm};
  }
  if (chart == "+") {
    if (!angle_avoids(psi1, 0.0)) throw LoopError(ErrorKind::NotInOverlap, "psi1 = 0 is outside U+");
    if (psi1 < 0) psi1 += 2.0 * kPi;
    // |ζ₊| = tan(θ/2 + π/4) folds over at θ = π/2.
    if (!(abs(p.z2) < abs(p.z1))) throw LoopError(ErrorKind::OutOfDomain, "U+ trivialization needs theta < pi/2");
    Vec<double> q = unit_phase(zm, "S3 chart change at z2 = 0");
    return {"+", {psi1}, QcLoop{}.product(q, zm)};
  }
  throw LoopError(ErrorKind::UnknownKind, "S3 chart '" + chart + "'");
}

S3Point s3_untrivialize(const TotalPoint& p) {
  Vec<double> zm;
  if (p.chart == "-") {
    zm = p.fiber;
  } else if (p.chart == "+") {
    Vec<double> q = unit_phase(p.fiber, "S3 chart change at |zeta+| = 0");
    zm = QcLoop{}.left_div(q, p.fiber);
  } else {
    throw LoopError(ErrorKind::UnknownKind, "S3 chart '" + p.chart + "'");
  }
  Cplx<double> z = as_cplx(zm);
  double s = 1.0 / std::sqrt(1.0 + norm2(z));
  Cplx<double> z1(s * std::cos(p.base[0]), s * std::sin(p.base[0]));
  return {z1, z1 * z};
}

BundleAtlas make_s3_bundle() {
  BundleAtlas atlas("s3-over-s1", Loop(QcLoop{}));
  atlas.add_chart({"-", [](const Vec<double>& x) { return angle_avoids(x[0], kPi); }, 1});
  atlas.add_chart({"+", [](const Vec<double>& x) { return angle_avoids(x[0], 0.0); }, 1});
  auto phase = [](const Vec<double>&, const Vec<double>& z) { return unit_phase(z, "S3 transition at zeta = 0"); };
  atlas.set_transition("-", "+", {TransitionMode::left, phase});
  atlas.set_transition("+", "-", {TransitionMode::left_inverse, phase});
  atlas.set_overlap_sampler([](std::mt19937_64& rng) {
    double psi = uniform(rng, 0.05, kPi - 0.05);
    if (uniform(rng, 0.0, 1.0) < 0.5) psi = -psi;
    return Vec<double>{psi};
  });
  return atlas;
}

double s3_trivialization_independence_residual(const S3Point& p, const Cplx<double>& eta) {
  S3Point moved = s3_right_action(p, eta);
  double base = std::atan2(p.z1.im, p.z1.re);
  S3Point via_minus = s3_untrivialize({"-", {base}, s3_trivialize(moved, "-").fiber});
  S3Point via_plus = s3_untrivialize({"+", {base}, s3_trivialize(moved, "+").fiber});
  return std::max(s3_distance(via_minus, via_plus), s3_distance(via_minus, moved));
}

// ---------------------------------------------------------------------------

Vec<double> winding_transition(int n, double theta, double gamma) {
  double half = n * theta / 2.0;
  if (!(std::abs(std::cos(half)) > kSingularGuard))
    throw LoopError(ErrorKind::DomainSingularity, "tan(n theta / 2) has a pole");
  double t = std::tan(half);
  return {t * std::cos(gamma), t * std::sin(gamma)};
}

Vec<double> iterate_left(const Loop& L, const Vec<double>& q, int n, const Vec<double>& zeta) {
  Vec<double> z = zeta;
  for (int k = 0; k < std::abs(n); ++k) z = n > 0 ? L.product(q, z) : L.left_div(q, z);
  return z;
}

Vec<double> winding_element_from_fibers(const Vec<double>& zeta_minus, const Vec<double>& zeta_plus) {
  Cplx<double> zm = as_cplx(zeta_minus), zp = as_cplx(zeta_plus);
  Cplx<double> one(1.0);
  Cplx<double> den = one - Cplx<double>(norm2(zm) * norm2(zp));
  guard_denominator(abs(den), "1 - |zeta-|^2 |zeta+|^2 = 0");
  return as_vec((zp * (one - zm * conj(zp)) - zm * (one - conj(zm) * zp)) / den);
}

BundleAtlas make_winding_bundle(int n) {
  BundleAtlas atlas("qs2-over-s2:n=" + std::to_string(n), Loop(QcLoop{}));
  atlas.add_chart({"-", [](const Vec<double>& x) { return x[0] >= 0.0 && x[0] < kPi / 2 + kStripHalfWidth; }, 2});
  atlas.add_chart({"+", [](const Vec<double>& x) { return x[0] <= kPi && x[0] > kPi / 2 - kStripHalfWidth; }, 2});
  auto element = [n](const Vec<double>& x, const Vec<double>&) { return winding_transition(n, kClutchAngle, x[1]); };
  atlas.set_transition("-", "+", {TransitionMode::left, element});
  atlas.set_transition("+", "-", {TransitionMode::left_inverse, element});
  atlas.set_overlap_sampler([](std::mt19937_64& rng) {
    double w = kStripHalfWidth * (1.0 - 1e-9);
    return Vec<double>{uniform(rng, kPi / 2 - w, kPi / 2 + w), uniform(rng, 0.0, 2.0 * kPi)};
  });
  return atlas;
}

BundleAtlas make_atlas(const std::string& name) {
  if (name == "s3-over-s1") return make_s3_bundle();
  const std::string prefix = "qs2-over-s2:n=";
  if (name.rfind(prefix, 0) == 0) {
    const char* s = name.c_str() + prefix.size();
    char* end = nullptr;
    long n = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && std::abs(n) <= 1000) return make_winding_bundle(static_cast<int>(n));
  }
  throw LoopError(ErrorKind::UnknownKind, "atlas '" + name + "'");
}

}  // namespace loopbundle
