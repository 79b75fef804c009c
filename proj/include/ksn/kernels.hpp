#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

// Double-precision inner loops for the float64 pipeline. Every kernel has a
// scalar reference implementation and, on x86-64 with AVX2+FMA, a vector
// variant selected once at startup. axpy, pwl_eval and max_abs are defined
// elementwise with explicit fma, so scalar and vector backends produce
// bit-identical outputs; dot may reassociate its reduction.
//
// The exact-rational pipeline never goes through these.

namespace ksn::kernels {

enum class Backend { Scalar, Avx2 };

Backend active_backend();
const char* backend_name(Backend b);
// Test/debug hook. Forcing Avx2 on a CPU without it throws ksn::ArgumentError.
void force_backend(Backend b);

// y[i] = fma(a, x[i], y[i])
void axpy(double a, const double* x, double* y, std::size_t n);

// sum of x[i] * y[i]; reduction order is backend-dependent
double dot(const double* x, const double* y, std::size_t n);

// max of |x[i]|; 0 for n = 0
double max_abs(const double* x, std::size_t n);

// Piecewise-linear evaluation on a uniform segment grid over [0, hi]:
//   idx    = clamp((long long)(t * idx_scale), 0, nseg - 1)
//   out[i] = fma(slope[idx], fma(-(double)idx, seg_width, t[i]), base[idx])
void pwl_eval(const double* t, double* out, std::size_t n, const double* base,
              const double* slope, std::size_t nseg, double idx_scale, double seg_width);

// Single-point reference used by both backends' tails and by scalar callers;
// keeping one definition pins the FP semantics everywhere.
inline double pwl_eval_one(double t, const double* base, const double* slope,
                           std::size_t nseg, double idx_scale, double seg_width) {
  long long idx = static_cast<long long>(t * idx_scale);
  if (idx < 0) idx = 0;
  if (idx >= static_cast<long long>(nseg)) idx = static_cast<long long>(nseg) - 1;
  const double local = std::fma(-static_cast<double>(idx), seg_width, t);
  return std::fma(slope[idx], local, base[idx]);
}

namespace scalar {
void axpy(double a, const double* x, double* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double max_abs(const double* x, std::size_t n);
void pwl_eval(const double* t, double* out, std::size_t n, const double* base,
              const double* slope, std::size_t nseg, double idx_scale, double seg_width);
}  // namespace scalar

#if defined(KSN_HAVE_AVX2)
namespace avx2 {
void axpy(double a, const double* x, double* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double max_abs(const double* x, std::size_t n);
void pwl_eval(const double* t, double* out, std::size_t n, const double* base,
              const double* slope, std::size_t nseg, double idx_scale, double seg_width);
}  // namespace avx2
#endif

bool cpu_supports_avx2();

}  // namespace ksn::kernels
