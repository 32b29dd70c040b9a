#pragma once

// Batched Möbius-type products and left divisions for the two complex disk
// loops, in split re/im layout. Scalar reference plus an AVX2 variant chosen
// at run time. Entries whose denominator falls under the singular guard are
// written as NaN and counted.

#include <cstddef>
#include <string>

namespace loopbundle::kernels {

enum class Isa { scalar, avx2 };

/// σ = +1 for Qℂ ((z+w)/(1 − z̄w)), σ = −1 for QH² ((z+w)/(1 + z̄w)).
enum class Disk { qc = 1, qh2 = -1 };

struct Batch {
  const double* re;
  const double* im;
};
struct OutBatch {
  double* re;
  double* im;
};

bool avx2_available();
/// Currently selected variant: AVX2 when the CPU has it, unless overridden.
Isa active_isa();
/// Override the dispatcher (tests); requesting avx2 on a CPU without it
/// keeps the scalar path.
void set_isa(Isa isa);
std::string isa_name(Isa isa);

/// out = a·b elementwise. Returns the number of singular entries.
std::size_t product(Disk disk, Batch a, Batch b, OutBatch out, std::size_t n);
/// out = a\b elementwise.
std::size_t left_div(Disk disk, Batch a, Batch b, OutBatch out, std::size_t n);

/// Explicit variants, used by the equivalence tests.
std::size_t mobius_scalar(int sigma, int s, Batch a, Batch b, OutBatch out, std::size_t n);
std::size_t mobius_avx2(int sigma, int s, Batch a, Batch b, OutBatch out, std::size_t n);

}  // namespace loopbundle::kernels
