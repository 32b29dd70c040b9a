#include "loopbundle/kernels.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define LOOPBUNDLE_X86 1
#endif

namespace loopbundle::kernels {

namespace {

constexpr double kGuard2 = 1e-18;  // |den|² below (1e-9)²

std::atomic<int> g_override{-1};

// num = w + s z, den = 1 − sσ z̄w; result num·conj(den)/|den|².
inline void mobius_one(double k, double s, double zr, double zi, double wr, double wi, double& outr, double& outi,
                       std::size_t& bad) {
  double pr = zr * wr + zi * wi;
  double pi = zr * wi - zi * wr;
  double dr = 1.0 - k * pr;
  double di = -(k * pi);
  double nr = wr + s * zr;
  double ni = wi + s * zi;
  double d2 = dr * dr + di * di;
  if (!(d2 >= kGuard2)) {
    outr = outi = std::numeric_limits<double>::quiet_NaN();
    ++bad;
    return;
  }
  double inv = 1.0 / d2;
  outr = (nr * dr + ni * di) * inv;
  outi = (ni * dr - nr * di) * inv;
}

}  // namespace

std::size_t mobius_scalar(int sigma, int s, Batch a, Batch b, OutBatch out, std::size_t n) {
  const double k = double(s * sigma), sd = double(s);
  std::size_t bad = 0;
  for (std::size_t i = 0; i < n; ++i) mobius_one(k, sd, a.re[i], a.im[i], b.re[i], b.im[i], out.re[i], out.im[i], bad);
  return bad;
}

#ifdef LOOPBUNDLE_X86
__attribute__((target("avx2"))) static std::size_t mobius_avx2_impl(int sigma, int s, Batch a, Batch b,
                                                                    OutBatch out, std::size_t n) {
  const double k = double(s * sigma), sd = double(s);
  const __m256d vk = _mm256_set1_pd(k), vs = _mm256_set1_pd(sd), one = _mm256_set1_pd(1.0);
  const __m256d guard = _mm256_set1_pd(kGuard2), nan = _mm256_set1_pd(std::numeric_limits<double>::quiet_NaN());
  std::size_t bad = 0, i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d zr = _mm256_loadu_pd(a.re + i), zi = _mm256_loadu_pd(a.im + i);
    __m256d wr = _mm256_loadu_pd(b.re + i), wi = _mm256_loadu_pd(b.im + i);
    __m256d pr = _mm256_add_pd(_mm256_mul_pd(zr, wr), _mm256_mul_pd(zi, wi));
    __m256d pi = _mm256_sub_pd(_mm256_mul_pd(zr, wi), _mm256_mul_pd(zi, wr));
    __m256d dr = _mm256_sub_pd(one, _mm256_mul_pd(vk, pr));
    __m256d di = _mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(vk, pi));
    __m256d nr = _mm256_add_pd(wr, _mm256_mul_pd(vs, zr));
    __m256d ni = _mm256_add_pd(wi, _mm256_mul_pd(vs, zi));
    __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dr, dr), _mm256_mul_pd(di, di));
    __m256d inv = _mm256_div_pd(one, d2);
    __m256d orr = _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(nr, dr), _mm256_mul_pd(ni, di)), inv);
    __m256d oi = _mm256_mul_pd(_mm256_sub_pd(_mm256_mul_pd(ni, dr), _mm256_mul_pd(nr, di)), inv);
    __m256d ok = _mm256_cmp_pd(d2, guard, _CMP_GE_OQ);
    bad += 4 - static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(ok))));
    _mm256_storeu_pd(out.re + i, _mm256_blendv_pd(nan, orr, ok));
    _mm256_storeu_pd(out.im + i, _mm256_blendv_pd(nan, oi, ok));
  }
  for (; i < n; ++i) mobius_one(k, sd, a.re[i], a.im[i], b.re[i], b.im[i], out.re[i], out.im[i], bad);
  return bad;
}
#endif

bool avx2_available() {
#ifdef LOOPBUNDLE_X86
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::size_t mobius_avx2(int sigma, int s, Batch a, Batch b, OutBatch out, std::size_t n) {
#ifdef LOOPBUNDLE_X86
  if (avx2_available()) return mobius_avx2_impl(sigma, s, a, b, out, n);
#endif
  return mobius_scalar(sigma, s, a, b, out, n);
}

Isa active_isa() {
  int o = g_override.load();
  if (o == static_cast<int>(Isa::scalar)) return Isa::scalar;
  return avx2_available() ? Isa::avx2 : Isa::scalar;
}

void set_isa(Isa isa) { g_override.store(static_cast<int>(isa)); }

std::string isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

namespace {
std::size_t dispatch(int sigma, int s, Batch a, Batch b, OutBatch out, std::size_t n) {
  return active_isa() == Isa::avx2 ? mobius_avx2(sigma, s, a, b, out, n) : mobius_scalar(sigma, s, a, b, out, n);
}
}  // namespace

std::size_t product(Disk disk, Batch a, Batch b, OutBatch out, std::size_t n) {
  return dispatch(static_cast<int>(disk), 1, a, b, out, n);
}

std::size_t left_div(Disk disk, Batch a, Batch b, OutBatch out, std::size_t n) {
  return dispatch(static_cast<int>(disk), -1, a, b, out, n);
}

}  // namespace loopbundle::kernels
