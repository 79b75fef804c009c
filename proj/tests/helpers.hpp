#pragma once

#include <string>
#include <vector>

#include "ksn/representer.hpp"
#include "ksn/transfer_stack.hpp"

namespace ksn::test {

// canonicalized rational literal (mpq_class(a, b) alone does not reduce)
inline Rational rat(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Stack whose phi is the identity (single-segment pwl): z_k is an exact
// weighted coordinate sum, handy for hand-computable cases.
template <ScalarField T>
TransferStack<T> identity_stack(int d, T lambda, T epsilon) {
  const int r = 2 * d;
  std::vector<Interval<T>> intervals;
  for (int k = 0; k <= r; ++k) intervals.push_back({T(3 * k), T(3 * k + 1)});
  T hi = epsilon > T(0) ? T(T(1) + T(r) * epsilon) : T(1);
  auto phi = InnerFunctionSpec<T>::hashed_piecewise_linear(1, 1, hi);
  return TransferStack<T>(d, std::move(lambda), std::move(epsilon), std::move(phi),
                          std::move(intervals));
}

// lambda = 1 with identity phi: z_k depends only on the coordinate sum, so
// equal-sum points are closed paths by construction.
template <ScalarField T>
TransferStack<T> sum_degenerate_stack(int d) {
  return identity_stack<T>(d, T(1), T(T(1) / T(4 * d)));
}

template <ScalarField T>
T unit_value(std::uint64_t seed, std::uint64_t index) {
  if constexpr (std::same_as<T, double>) {
    return mix64_unit_double(seed, index);
  } else {
    return mix64_unit_rational(seed, index);
  }
}

template <ScalarField T>
std::vector<T> random_point(int d, std::uint64_t seed, std::uint64_t index) {
  std::vector<T> x(d);
  for (int j = 0; j < d; ++j)
    x[j] = unit_value<T>(seed, index * static_cast<std::uint64_t>(d) + j);
  return x;
}

template <ScalarField T>
SampleSet<T> random_sample(int d, int n, std::uint64_t seed) {
  SampleSet<T> sample;
  sample.d = d;
  for (int i = 0; i < n; ++i) {
    sample.points.push_back(random_point<T>(d, seed, static_cast<std::uint64_t>(i)));
    sample.values.push_back(unit_value<T>(seed ^ 0x5EEDULL, static_cast<std::uint64_t>(i)));
  }
  return sample;
}

}  // namespace ksn::test
