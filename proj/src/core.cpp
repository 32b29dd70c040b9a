#include "loopbundle/core.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "loopbundle/kernels.hpp"

namespace loopbundle {

namespace {

double rel_distance(const Loop& L, const Vec<double>& x, const Vec<double>& y) {
  return L.distance(x, y) / std::max(1.0, max_abs(y));
}

}  // namespace

VerificationReport check_loop_axioms(const Loop& L, long n_samples, std::uint64_t seed, double tol) {
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep("axioms");
  MaxTracker ident, ldiv, rdiv, closure, assoc, adid;
  long rejected = 0;
  const bool disk = L.kind() == LoopKind::qc || L.kind() == LoopKind::qh2;
  std::vector<double> ar, ai, br, bi;
  const Vec<double> e = L.identity();
  const double radius = L.wide_radius();

  for (long s = 0; s < n_samples; ++s) {
    auto rng = rng_for(seed, static_cast<std::uint64_t>(s));
    Vec<double> a = L.sample(rng, radius), b = L.sample(rng, radius), c = L.sample(rng, radius);
    if (disk) {
      ar.push_back(a[0]), ai.push_back(a[1]);
      br.push_back(b[0]), bi.push_back(b[1]);
    }
    try {
      ident.add(std::max(rel_distance(L, L.product(e, a), a), rel_distance(L, L.product(a, e), a)));
      Vec<double> x = L.left_div(a, b);
      Vec<double> y = L.right_div(b, a);
      ldiv.add(rel_distance(L, L.product(a, x), b));
      rdiv.add(rel_distance(L, L.product(y, a), b));
      Vec<double> ab = L.product(a, b);
      closure.add(L.in_domain(ab) && L.in_domain(x) && L.in_domain(y) ? 0.0 : 1.0);
      Vec<double> lhs = L.product(ab, associator(L, AssociatorKind::left, a, b, c));
      assoc.add(rel_distance(L, lhs, L.product(a, L.product(b, c))));
      adid.add(L.distance(ad_map(L, b, a, e), e));
    } catch (const LoopError& err) {
      if (err.kind() != ErrorKind::DomainSingularity && err.kind() != ErrorKind::NoSolutionInChart &&
          err.kind() != ErrorKind::OutOfDomain)
        throw;
      ++rejected;
    }
  }
  rep.add("identity", ident.value, tol, ident.count);
  rep.add("left_division_round_trip", ldiv.value, tol, ldiv.count);
  rep.add("right_division_round_trip", rdiv.value, tol, rdiv.count);
  rep.add("chart_closure", closure.value, 0.0, closure.count);
  rep.add("left_associator_defining_property", assoc.value, tol, assoc.count);
  rep.add("ad_map_fixes_identity", adid.value, tol, adid.count);
  if (disk) {
    // Same draws through the batched kernels: a·(a\b) = b.
    const std::size_t n = ar.size();
    const auto kind = L.kind() == LoopKind::qc ? kernels::Disk::qc : kernels::Disk::qh2;
    std::vector<double> xr(n), xi(n), yr(n), yi(n);
    kernels::left_div(kind, {ar.data(), ai.data()}, {br.data(), bi.data()}, {xr.data(), xi.data()}, n);
    kernels::product(kind, {ar.data(), ai.data()}, {xr.data(), xi.data()}, {yr.data(), yi.data()}, n);
    MaxTracker batched;
    long bad = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::isnan(xr[i]) || std::isnan(yr[i])) {
        ++bad;
        continue;
      }
      batched.add(rel_distance(L, {yr[i], yi[i]}, {br[i], bi[i]}));
    }
    rep.add("batched_left_division_round_trip", batched.value, tol, batched.count);
    if (bad > 0) rep.notes.push_back("batched kernels: singular entries skipped: " + std::to_string(bad));
  }
  if (rejected > 0) rep.notes.push_back("rejected draws (singular or outside chart): " + std::to_string(rejected));
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace loopbundle
