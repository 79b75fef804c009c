#pragma once

#include <cstdint>
#include <vector>

#include "ksn/numeric.hpp"

namespace ksn {

enum class InnerPhiKind { HashedPiecewiseLinear, TranscendentalPower };

const char* inner_phi_kind_name(InnerPhiKind k);

// A concrete inner function phi: strictly increasing and 4-Lipschitz on its
// closed domain [0, domain_hi], deterministic in its parameters.
//
// HashedPiecewiseLinear: `segments` equal-width pieces over the domain; the
// slope of piece i is 1 + 3*u_i with u_i = mix64(seed, i) / 2^64, then all
// slopes are rescaled by segments/sum(s_i) so phi(domain_hi) - phi(0) equals
// the domain length. Rescaled slopes stay in (0, 4]. Exact in rational mode.
//
// TranscendentalPower: phi(t) = (t + 1)^sqrt(2). Float64 only.
template <ScalarField T>
class InnerFunctionSpec {
 public:
  static InnerFunctionSpec hashed_piecewise_linear(std::uint64_t seed, int segments,
                                                   const T& domain_hi);
  // Throws ArgumentError for T = Rational: this phi has no exact representation.
  static InnerFunctionSpec transcendental_power(const T& domain_hi);

  InnerPhiKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  int segments() const { return segments_; }
  const T& domain_lo() const { return domain_lo_; }
  const T& domain_hi() const { return domain_hi_; }

  // eval_phi; throws DomainError outside [domain_lo, domain_hi]
  T operator()(const T& t) const;
  // Elementwise identical to operator(); float64 goes through the pwl kernel.
  void eval_many(const T* t, T* out, std::size_t n) const;

  bool same_spec(const InnerFunctionSpec& o) const {
    return kind_ == o.kind_ && seed_ == o.seed_ && segments_ == o.segments_ &&
           domain_lo_ == o.domain_lo_ && domain_hi_ == o.domain_hi_;
  }

  // pwl table access (tests, batch transfer evaluation)
  const std::vector<T>& pwl_bases() const { return base_; }
  const std::vector<T>& pwl_slopes() const { return slope_; }

 private:
  InnerFunctionSpec() = default;
  void build_pwl_table();
  void check_domain(const T& t) const;

  InnerPhiKind kind_ = InnerPhiKind::HashedPiecewiseLinear;
  std::uint64_t seed_ = 0;
  int segments_ = 0;
  T domain_lo_{};
  T domain_hi_{};
  // piecewise-linear data; empty for TranscendentalPower
  std::vector<T> base_;   // value at the left breakpoint of each segment
  std::vector<T> slope_;  // rescaled slope of each segment
  T seg_width_{};
  double idx_scale_ = 0;  // segments / domain length (float64 indexing)
};

template <ScalarField T>
T eval_phi(const InnerFunctionSpec<T>& spec, const T& t) {
  return spec(t);
}

template <ScalarField T>
struct MonotoneLipschitzReport {
  bool monotone = false;
  T lipschitz_estimate{};
};

// Evaluates phi on a uniform grid over its domain; monotone means every
// consecutive difference is strictly positive, lipschitz_estimate is the
// largest chord slope between consecutive grid points.
template <ScalarField T>
MonotoneLipschitzReport<T> verify_monotone_lipschitz(const InnerFunctionSpec<T>& spec,
                                                     int grid_points);

template <>
double InnerFunctionSpec<double>::operator()(const double& t) const;
template <>
Rational InnerFunctionSpec<Rational>::operator()(const Rational& t) const;
template <>
void InnerFunctionSpec<double>::eval_many(const double* t, double* out, std::size_t n) const;
template <>
void InnerFunctionSpec<Rational>::eval_many(const Rational* t, Rational* out,
                                            std::size_t n) const;

extern template class InnerFunctionSpec<double>;
extern template class InnerFunctionSpec<Rational>;
extern template MonotoneLipschitzReport<double> verify_monotone_lipschitz(
    const InnerFunctionSpec<double>&, int);
extern template MonotoneLipschitzReport<Rational> verify_monotone_lipschitz(
    const InnerFunctionSpec<Rational>&, int);

}  // namespace ksn
