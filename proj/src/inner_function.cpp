#include "ksn/inner_function.hpp"

#include <cmath>

#include "ksn/errors.hpp"
#include "ksn/kernels.hpp"

namespace ksn {

namespace {

// sqrt(2), correctly rounded; pinned so every build evaluates the same power.
constexpr double kSqrt2 = 0x1.6a09e667f3bcdp+0;

double to_double(double v) { return v; }
double to_double(const Rational& v) { return v.get_d(); }

template <ScalarField T>
T unit_fraction(std::uint64_t seed, std::uint64_t index) {
  if constexpr (std::same_as<T, double>) {
    return mix64_unit_double(seed, index);
  } else {
    return mix64_unit_rational(seed, index);
  }
}

}  // namespace

const char* inner_phi_kind_name(InnerPhiKind k) {
  return k == InnerPhiKind::HashedPiecewiseLinear ? "hashed_piecewise_linear"
                                                  : "transcendental_power";
}

template <ScalarField T>
InnerFunctionSpec<T> InnerFunctionSpec<T>::hashed_piecewise_linear(std::uint64_t seed,
                                                                   int segments,
                                                                   const T& domain_hi) {
  if (segments < 1) throw ArgumentError("segments must be positive");
  if (!(domain_hi > T(0))) throw ArgumentError("domain upper end must be positive");
  InnerFunctionSpec spec;
  spec.kind_ = InnerPhiKind::HashedPiecewiseLinear;
  spec.seed_ = seed;
  spec.segments_ = segments;
  spec.domain_lo_ = T(0);
  spec.domain_hi_ = domain_hi;
  spec.build_pwl_table();
  return spec;
}

template <ScalarField T>
InnerFunctionSpec<T> InnerFunctionSpec<T>::transcendental_power(const T& domain_hi) {
  if constexpr (std::same_as<T, Rational>) {
    throw ArgumentError("transcendental_power phi requires float64 mode");
  } else {
    if (!(domain_hi > 0)) throw ArgumentError("domain upper end must be positive");
    InnerFunctionSpec spec;
    spec.kind_ = InnerPhiKind::TranscendentalPower;
    spec.domain_lo_ = 0;
    spec.domain_hi_ = domain_hi;
    return spec;
  }
}

template <ScalarField T>
void InnerFunctionSpec<T>::build_pwl_table() {
  const int n = segments_;
  std::vector<T> raw(n);
  T raw_sum(0);
  for (int i = 0; i < n; ++i) {
    T u = unit_fraction<T>(seed_, static_cast<std::uint64_t>(i));
    raw[i] = T(1) + T(3) * u;  // in [1, 4)
    raw_sum += raw[i];
  }
  slope_.resize(n);
  base_.resize(n);
  const T nT = T(n);
  for (int i = 0; i < n; ++i) slope_[i] = (raw[i] * nT) / raw_sum;
  seg_width_ = (domain_hi_ - domain_lo_) / nT;
  T acc(0);
  for (int i = 0; i < n; ++i) {
    base_[i] = acc;
    if constexpr (std::same_as<T, double>) {
      acc = std::fma(slope_[i], seg_width_, acc);
    } else {
      acc += slope_[i] * seg_width_;
    }
  }
  idx_scale_ = static_cast<double>(n) / to_double(domain_hi_ - domain_lo_);
}

template <ScalarField T>
void InnerFunctionSpec<T>::check_domain(const T& t) const {
  if (t < domain_lo_ || t > domain_hi_)
    throw DomainError("phi argument " + format_number(t) + " outside domain [" +
                      format_number(domain_lo_) + ", " + format_number(domain_hi_) + "]");
}

template <>
double InnerFunctionSpec<double>::operator()(const double& t) const {
  check_domain(t);
  if (kind_ == InnerPhiKind::TranscendentalPower) return std::pow(t + 1.0, kSqrt2);
  return kernels::pwl_eval_one(t, base_.data(), slope_.data(), slope_.size(), idx_scale_,
                               seg_width_);
}

template <>
Rational InnerFunctionSpec<Rational>::operator()(const Rational& t) const {
  check_domain(t);
  // segment index: floor(t * n / width), clamped to the last segment
  const int n = segments_;
  Rational pos = (t - domain_lo_) / seg_width_;
  mpz_class idx;
  mpz_fdiv_q(idx.get_mpz_t(), pos.get_num_mpz_t(), pos.get_den_mpz_t());
  long i = idx.get_si();
  if (i < 0) i = 0;
  if (i >= n) i = n - 1;
  Rational left = domain_lo_ + Rational(i) * seg_width_;
  return base_[i] + slope_[i] * (t - left);
}

template <>
void InnerFunctionSpec<double>::eval_many(const double* t, double* out, std::size_t n) const {
  for (std::size_t i = 0; i < n; ++i) check_domain(t[i]);
  if (kind_ == InnerPhiKind::TranscendentalPower) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(t[i] + 1.0, kSqrt2);
    return;
  }
  kernels::pwl_eval(t, out, n, base_.data(), slope_.data(), slope_.size(), idx_scale_,
                    seg_width_);
}

template <>
void InnerFunctionSpec<Rational>::eval_many(const Rational* t, Rational* out,
                                            std::size_t n) const {
  for (std::size_t i = 0; i < n; ++i) out[i] = (*this)(t[i]);
}

template <ScalarField T>
MonotoneLipschitzReport<T> verify_monotone_lipschitz(const InnerFunctionSpec<T>& spec,
                                                     int grid_points) {
  if (grid_points < 2) throw ArgumentError("grid_points must be at least 2");
  MonotoneLipschitzReport<T> report;
  report.monotone = true;
  report.lipschitz_estimate = T(0);
  const T lo = spec.domain_lo();
  const T span = spec.domain_hi() - spec.domain_lo();
  T prev_t = lo;
  T prev_phi = spec(lo);
  for (int i = 1; i < grid_points; ++i) {
    T t;
    if constexpr (std::same_as<T, double>) {
      t = lo + span * (static_cast<double>(i) / static_cast<double>(grid_points - 1));
    } else {
      Rational frac(i, grid_points - 1);
      frac.canonicalize();
      t = lo + span * frac;
    }
    T phi = spec(t);
    T rise = phi - prev_phi;
    if (!(rise > T(0))) report.monotone = false;
    T slope = rise / (t - prev_t);
    if (slope > report.lipschitz_estimate) report.lipschitz_estimate = slope;
    prev_t = t;
    prev_phi = phi;
  }
  return report;
}

template class InnerFunctionSpec<double>;
template class InnerFunctionSpec<Rational>;
template MonotoneLipschitzReport<double> verify_monotone_lipschitz(
    const InnerFunctionSpec<double>&, int);
template MonotoneLipschitzReport<Rational> verify_monotone_lipschitz(
    const InnerFunctionSpec<Rational>&, int);

}  // namespace ksn
