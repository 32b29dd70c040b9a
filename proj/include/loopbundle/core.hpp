#pragma once

// Operations derived from the loop structure: associators, the Ad-map, and
// the sampled axiom checker.

#include <cstdint>

#include "loopbundle/loop.hpp"
#include "loopbundle/report.hpp"

namespace loopbundle {

enum class AssociatorKind { left, adjoint, right };

/// l_(a,b)c = (a·b)\(a·(b·c)), l̂_(a,b)c = a·(b·((a·b)\c)),
/// r_(a,b)c = ((c·a)·b)/(a·b). Composed from product and divisions only.
template <class T>
Vec<T> associator(const Loop& L, AssociatorKind kind, const Vec<T>& a, const Vec<T>& b, const Vec<T>& c) {
  Vec<T> ab = L.product(a, b);
  switch (kind) {
    case AssociatorKind::left:
      return L.left_div(ab, L.product(a, L.product(b, c)));
    case AssociatorKind::adjoint:
      return L.product(a, L.product(b, L.left_div(ab, c)));
    case AssociatorKind::right:
      return L.right_div(L.product(L.product(c, a), b), ab);
  }
  throw LoopError(ErrorKind::UnknownKind, "associator kind");
}

/// Ad_b(a)(c) = a\(((a·b)·c)/b).
template <class T>
Vec<T> ad_map(const Loop& L, const Vec<T>& b, const Vec<T>& a, const Vec<T>& c) {
  return L.left_div(a, L.right_div(L.product(L.product(a, b), c), b));
}

/// Ad⁻¹_b(a)(c) = (a·b)\((a·c)·b).
template <class T>
Vec<T> ad_map_inverse(const Loop& L, const Vec<T>& b, const Vec<T>& a, const Vec<T>& c) {
  return L.left_div(L.product(a, b), L.product(L.product(a, c), b));
}

/// Samples the chart and checks identity, both division round trips, chart
/// closure, the defining property of l_(a,b) and Ad_b(a)(e) = e.
VerificationReport check_loop_axioms(const Loop& L, long n_samples, std::uint64_t seed, double tol = 1e-11);

}  // namespace loopbundle
