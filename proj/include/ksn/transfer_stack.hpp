#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "ksn/errors.hpp"
#include "ksn/inner_function.hpp"
#include "ksn/numeric.hpp"

namespace ksn {

template <ScalarField T>
struct Interval {
  T lo{};
  T hi{};
  bool operator==(const Interval&) const = default;
};

// Algebraic sigmoid, a strictly increasing bijection R -> (0, 1):
//   sigma(u) = 1/2 + u / (2 * (1 + |u|))
// Exactly invertible, and exact over the rationals.
template <ScalarField T>
T sigma(const T& u) {
  if constexpr (std::same_as<T, double>) {
    return 0.5 + u / (2.0 * (1.0 + std::fabs(u)));
  } else {
    return Rational(1, 2) + u / (T(2) * (T(1) + abs_value(u)));
  }
}

template <ScalarField T>
T sigma_inv(const T& v) {
  if (!(v > T(0)) || !(v < T(1))) throw DomainError("sigma_inv argument must lie in (0, 1)");
  if constexpr (std::same_as<T, double>) {
    const double t = 2.0 * v - 1.0;
    return t >= 0 ? t / (1.0 - t) : t / (1.0 + t);
  } else {
    T t = T(2) * v - T(1);
    return t >= T(0) ? T(t / (T(1) - t)) : T(t / (T(1) + t));
  }
}

// The middle layer of the network: transfer values
//   z_k(x) = sum_j lambda^(j-1) * phi(x_j + epsilon*k),  k = 0..r, r = 2d,
// plus the remap w_k = tau_k(z_k) onto pairwise disjoint open intervals
// (a_k, b_k), with tau_k(t) = a_k + (b_k - a_k) * sigma(t).
template <ScalarField T>
class TransferStack {
 public:
  TransferStack(int d, T lambda, T epsilon, InnerFunctionSpec<T> phi,
                std::vector<Interval<T>> intervals);

  int d() const { return d_; }
  int r() const { return 2 * d_; }
  int num_blocks() const { return r() + 1; }
  const T& lambda() const { return lambda_; }
  const T& epsilon() const { return epsilon_; }
  const InnerFunctionSpec<T>& phi() const { return phi_; }
  const std::vector<Interval<T>>& intervals() const { return intervals_; }

  T z_eval(std::span<const T> x, int k) const;
  T w_eval(std::span<const T> x, int k) const;
  T tau(const T& t, int k) const;
  T tau_inv(const T& w, int k) const;

  // Row-major n x (r+1) table of w_k values; entry (i, k) is bit-identical
  // to w_eval(points[i], k). The float64 variant batches phi through the
  // pwl kernel and accumulates with axpy.
  std::vector<T> w_table(const std::vector<std::vector<T>>& points) const;
  std::vector<T> z_table(const std::vector<std::vector<T>>& points) const;

 private:
  void check_point(std::span<const T> x, int k) const;
  int d_;
  T lambda_;
  T epsilon_;
  InnerFunctionSpec<T> phi_;
  std::vector<Interval<T>> intervals_;
};

// Stack with r = 2d, lambda = 1/2, epsilon = 1/(4d), intervals (3k, 3k+1),
// and phi = HashedPiecewiseLinear(seed 0x4B535431, 64 segments) on
// [0, 1 + 2d*epsilon].
template <ScalarField T>
TransferStack<T> default_stack(int d);

constexpr std::uint64_t kDefaultPhiSeed = 0x4B535431ULL;
constexpr int kDefaultPhiSegments = 64;

extern template class TransferStack<double>;
extern template class TransferStack<Rational>;
extern template TransferStack<double> default_stack<double>(int);
extern template TransferStack<Rational> default_stack<Rational>(int);

}  // namespace ksn
