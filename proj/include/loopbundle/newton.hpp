#pragma once

#include <algorithm>
#include <cmath>

#include "loopbundle/errors.hpp"
#include "loopbundle/linalg.hpp"

namespace loopbundle {

struct NewtonOptions {
  double tol = 1e-13;
  int max_iter = 50;
  // Once the value has converged, derivative components still need a few
  // iterations to settle when T is a dual type.
  int extra_iter = 4;
};

/// Solve residual(x) = 0 starting from x0. `residual` must be generic over the
/// scalar type (it is differentiated with one extra dual layer).
template <class T, class F>
Vec<T> newton_solve(F&& residual, Vec<T> x, const NewtonOptions& opt = {}) {
  int extra = -1;
  for (int it = 0; it < opt.max_iter + opt.extra_iter; ++it) {
    Vec<T> r = residual(x);
    Mat<T> jac = jacobian(residual, x);
    LU<T> lu(jac);
    if (lu.singular())
      throw LoopError(ErrorKind::NoSolutionInChart, "Newton: singular Jacobian");
    Vec<T> dx = lu.solve(r);
    double step = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] -= dx[i];
      step = std::max(step, std::abs(primal(dx[i])));
      scale = std::max(scale, std::abs(primal(x[i])));
      if (!std::isfinite(primal(x[i])))
        throw LoopError(ErrorKind::NoSolutionInChart, "Newton diverged");
    }
    if (extra < 0 && step <= opt.tol * scale) {
      if constexpr (!is_dual_v<T>) return x;
      extra = 0;
    }
    if (extra >= 0 && ++extra > opt.extra_iter) return x;
    if (extra < 0 && it + 1 >= opt.max_iter) break;
  }
  throw LoopError(ErrorKind::NoSolutionInChart, "Newton did not converge");
}

}  // namespace loopbundle
