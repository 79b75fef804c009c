#include <cmath>

#include "ksn/kernels.hpp"

namespace ksn::kernels::scalar {

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc = std::fma(x[i], y[i], acc);
  return acc;
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

void pwl_eval(const double* t, double* out, std::size_t n, const double* base,
              const double* slope, std::size_t nseg, double idx_scale, double seg_width) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = pwl_eval_one(t[i], base, slope, nseg, idx_scale, seg_width);
}

}  // namespace ksn::kernels::scalar
