#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "ksn/kernels.hpp"
#include "ksn/numeric.hpp"

namespace k = ksn::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed, double lo, double hi) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo + (hi - lo) * ksn::mix64_unit_double(seed, i);
  return v;
}

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 64, 129, 1000, 1001};

}  // namespace

TEST_CASE("a backend is active") {
  const char* name = k::backend_name(k::active_backend());
  CHECK((std::string(name) == "scalar" || std::string(name) == "avx2"));
}

#if defined(__x86_64__)
TEST_CASE("avx2 variants match the scalar reference") {
  if (!k::cpu_supports_avx2()) {
    MESSAGE("cpu lacks avx2+fma, skipping equivalence checks");
    return;
  }
  for (std::size_t n : kSizes) {
    auto x = random_vec(n, 11 + n, -3.0, 3.0);
    auto y = random_vec(n, 23 + n, -3.0, 3.0);

    // axpy: defined elementwise with fma, bitwise equal
    {
      auto ys = y, yv = y;
      k::scalar::axpy(0.7366, x.data(), ys.data(), n);
      k::avx2::axpy(0.7366, x.data(), yv.data(), n);
      CHECK(ys == yv);
    }
    // max_abs: exact comparison both paths
    CHECK(k::scalar::max_abs(x.data(), n) == k::avx2::max_abs(x.data(), n));
    // dot: reductions reassociate; compare against long double reference
    {
      const double ds = k::scalar::dot(x.data(), y.data(), n);
      const double dv = k::avx2::dot(x.data(), y.data(), n);
      long double ref = 0;
      for (std::size_t i = 0; i < n; ++i)
        ref += static_cast<long double>(x[i]) * static_cast<long double>(y[i]);
      const double scale = std::max(1.0, std::fabs(static_cast<double>(ref)));
      CHECK(std::fabs(ds - dv) <= 1e-12 * scale);
      CHECK(std::fabs(ds - static_cast<double>(ref)) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("pwl kernel: avx2 is bit-identical to the scalar reference") {
  if (!k::cpu_supports_avx2()) return;
  const std::size_t nseg = 64;
  const double hi = 1.5;
  const double width = hi / static_cast<double>(nseg);
  const double idx_scale = static_cast<double>(nseg) / hi;
  auto slope = random_vec(nseg, 1, 0.25, 4.0);
  std::vector<double> base(nseg);
  double acc = 0;
  for (std::size_t i = 0; i < nseg; ++i) {
    base[i] = acc;
    acc = std::fma(slope[i], width, acc);
  }
  for (std::size_t n : kSizes) {
    auto t = random_vec(n, 77 + n, 0.0, hi);
    if (n > 2) t[1] = hi;  // right endpoint hits the clamp
    if (n > 3) t[2] = 0.0;
    std::vector<double> out_s(n), out_v(n);
    k::scalar::pwl_eval(t.data(), out_s.data(), n, base.data(), slope.data(), nseg, idx_scale,
                        width);
    k::avx2::pwl_eval(t.data(), out_v.data(), n, base.data(), slope.data(), nseg, idx_scale,
                      width);
    CHECK(out_s == out_v);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(out_s[i] == k::pwl_eval_one(t[i], base.data(), slope.data(), nseg, idx_scale, width));
  }
}
#endif

TEST_CASE("force_backend switches the dispatch table") {
  const k::Backend original = k::active_backend();
  k::force_backend(k::Backend::Scalar);
  CHECK(k::active_backend() == k::Backend::Scalar);
  std::vector<double> x{1.0, 2.0, 3.0};
  CHECK(k::dot(x.data(), x.data(), 3) == doctest::Approx(14.0));
  k::force_backend(original);
  CHECK(k::active_backend() == original);
}
