#pragma once

#include <complex>
#include <optional>

#include "loopbundle/errors.hpp"
#include "loopbundle/linalg.hpp"

namespace testing {

/// Error kind raised by f, or nullopt when it returns normally.
template <class F>
std::optional<loopbundle::ErrorKind> kind_of(F&& f) {
  try {
    f();
  } catch (const loopbundle::LoopError& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline std::complex<double> to_c(const loopbundle::Vec<double>& v) { return {v[0], v[1]}; }
inline loopbundle::Vec<double> to_v(std::complex<double> z) { return {z.real(), z.imag()}; }
inline loopbundle::Vec<double> to_v(double x) { return {x, 0.0}; }

}  // namespace testing
