// AVX2+FMA variants. Compiled with -mavx2 -mfma; selected at runtime only
// when the CPU reports both feature bits. Elementwise kernels mirror the
// scalar reference operation for operation so results match bitwise; dot
// keeps four independent accumulators and reassociates.

#include <immintrin.h>

#include "ksn/kernels.hpp"

namespace ksn::kernels::avx2 {

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, vx, vy));
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  __m256d acc = _mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3));
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d s = _mm_add_pd(lo, hi);
  double r = _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
  for (; i < n; ++i) r = std::fma(x[i], y[i], r);
  return r;
}

double max_abs(const double* x, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d vm = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    vm = _mm256_max_pd(vm, _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x + i)));
  __m128d lo = _mm256_castpd256_pd128(vm);
  __m128d hi = _mm256_extractf128_pd(vm, 1);
  __m128d m2 = _mm_max_pd(lo, hi);
  double m = _mm_cvtsd_f64(_mm_max_sd(m2, _mm_unpackhi_pd(m2, m2)));
  for (; i < n; ++i) {
    const double a = x[i] < 0 ? -x[i] : x[i];
    if (a > m) m = a;
  }
  return m;
}

void pwl_eval(const double* t, double* out, std::size_t n, const double* base,
              const double* slope, std::size_t nseg, double idx_scale, double seg_width) {
  const __m256d vscale = _mm256_set1_pd(idx_scale);
  const __m256d vwidth = _mm256_set1_pd(seg_width);
  const __m128i vzero = _mm_setzero_si128();
  const __m128i vmax = _mm_set1_epi32(static_cast<int>(nseg) - 1);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vt = _mm256_loadu_pd(t + i);
    __m128i idx = _mm256_cvttpd_epi32(_mm256_mul_pd(vt, vscale));
    idx = _mm_min_epi32(_mm_max_epi32(idx, vzero), vmax);
    const __m256d vidx = _mm256_cvtepi32_pd(idx);
    const __m256d vlocal = _mm256_fnmadd_pd(vidx, vwidth, vt);
    const __m256d vslope = _mm256_i32gather_pd(slope, idx, 8);
    const __m256d vbase = _mm256_i32gather_pd(base, idx, 8);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(vslope, vlocal, vbase));
  }
  for (; i < n; ++i)
    out[i] = pwl_eval_one(t[i], base, slope, nseg, idx_scale, seg_width);
}

}  // namespace ksn::kernels::avx2
