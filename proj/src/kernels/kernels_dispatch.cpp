#include <atomic>
#include <cstdlib>
#include <string_view>

#include "ksn/errors.hpp"
#include "ksn/kernels.hpp"

namespace ksn::kernels {

bool cpu_supports_avx2() {
#if defined(KSN_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

struct Vtab {
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
  void (*pwl_eval)(const double*, double*, std::size_t, const double*, const double*,
                   std::size_t, double, double);
};

constexpr Vtab kScalarVtab{scalar::axpy, scalar::dot, scalar::max_abs, scalar::pwl_eval};
#if defined(KSN_HAVE_AVX2)
constexpr Vtab kAvx2Vtab{avx2::axpy, avx2::dot, avx2::max_abs, avx2::pwl_eval};
#endif

Backend pick_default() {
  if (const char* env = std::getenv("KSN_BACKEND")) {
    std::string_view v(env);
    if (v == "scalar") return Backend::Scalar;
  }
  return cpu_supports_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<const Vtab*> g_vtab{nullptr};
std::atomic<Backend> g_backend{Backend::Scalar};

const Vtab* vtab() {
  const Vtab* t = g_vtab.load(std::memory_order_acquire);
  if (t) return t;
  Backend b = pick_default();
#if defined(KSN_HAVE_AVX2)
  const Vtab* chosen = b == Backend::Avx2 ? &kAvx2Vtab : &kScalarVtab;
#else
  const Vtab* chosen = &kScalarVtab;
  b = Backend::Scalar;
#endif
  g_backend.store(b, std::memory_order_relaxed);
  g_vtab.store(chosen, std::memory_order_release);
  return chosen;
}

}  // namespace

Backend active_backend() {
  vtab();
  return g_backend.load(std::memory_order_relaxed);
}

const char* backend_name(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
  if (b == Backend::Avx2) {
#if defined(KSN_HAVE_AVX2)
    if (!cpu_supports_avx2()) throw ArgumentError("avx2 backend not supported on this CPU");
    g_vtab.store(&kAvx2Vtab, std::memory_order_release);
#else
    throw ArgumentError("avx2 backend not compiled in");
#endif
  } else {
    g_vtab.store(&kScalarVtab, std::memory_order_release);
  }
  g_backend.store(b, std::memory_order_relaxed);
}

void axpy(double a, const double* x, double* y, std::size_t n) { vtab()->axpy(a, x, y, n); }
double dot(const double* x, const double* y, std::size_t n) { return vtab()->dot(x, y, n); }
double max_abs(const double* x, std::size_t n) { return vtab()->max_abs(x, n); }
void pwl_eval(const double* t, double* out, std::size_t n, const double* base,
              const double* slope, std::size_t nseg, double idx_scale, double seg_width) {
  vtab()->pwl_eval(t, out, n, base, slope, nseg, idx_scale, seg_width);
}

}  // namespace ksn::kernels
