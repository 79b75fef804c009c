#include "ksn/transfer_stack.hpp"

#include <algorithm>

#include "ksn/kernels.hpp"

namespace ksn {

template <ScalarField T>
TransferStack<T>::TransferStack(int d, T lambda, T epsilon, InnerFunctionSpec<T> phi,
                                std::vector<Interval<T>> intervals)
    : d_(d),
      lambda_(std::move(lambda)),
      epsilon_(std::move(epsilon)),
      phi_(std::move(phi)),
      intervals_(std::move(intervals)) {
  if (d_ < 2) throw ArgumentError("dimension d must be greater than 1");
  if (lambda_ == T(0)) throw ArgumentError("lambda must be nonzero");
  if (epsilon_ == T(0)) throw ArgumentError("epsilon must be nonzero");
  if (static_cast<int>(intervals_.size()) != num_blocks())
    throw ArgumentError("expected " + std::to_string(num_blocks()) + " intervals, got " +
                        std::to_string(intervals_.size()));
  for (const auto& iv : intervals_)
    if (!(iv.lo < iv.hi)) throw ArgumentError("interval endpoints must satisfy lo < hi");
  // pairwise disjointness via endpoint comparison on the sorted list
  std::vector<Interval<T>> sorted = intervals_;
  std::sort(sorted.begin(), sorted.end(),
            [](const Interval<T>& a, const Interval<T>& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].lo < sorted[i - 1].hi)
      throw ArgumentError("intervals overlap: (" + format_number(sorted[i - 1].lo) + ", " +
                          format_number(sorted[i - 1].hi) + ") and (" +
                          format_number(sorted[i].lo) + ", " + format_number(sorted[i].hi) +
                          ")");
}

template <ScalarField T>
void TransferStack<T>::check_point(std::span<const T> x, int k) const {
  if (static_cast<int>(x.size()) != d_)
    throw ArgumentError("point has " + std::to_string(x.size()) + " coordinates, expected " +
                        std::to_string(d_));
  if (k < 0 || k > r()) throw ArgumentError("block index k out of range");
  for (const T& c : x)
    if (c < T(0) || c > T(1)) throw DomainError("coordinate " + format_number(c) + " outside [0, 1]");
}

template <ScalarField T>
T TransferStack<T>::z_eval(std::span<const T> x, int k) const {
  check_point(x, k);
  const T shift = epsilon_ * T(k);
  T acc = phi_(T(x[0] + shift));
  T weight = lambda_;
  for (int j = 1; j < d_; ++j) {
    T phi_val = phi_(T(x[j] + shift));
    if constexpr (std::same_as<T, double>) {
      acc = std::fma(weight, phi_val, acc);
    } else {
      acc += weight * phi_val;
    }
    weight *= lambda_;
  }
  return acc;
}

template <ScalarField T>
T TransferStack<T>::tau(const T& t, int k) const {
  const Interval<T>& iv = intervals_[k];
  return iv.lo + (iv.hi - iv.lo) * sigma(t);
}

template <ScalarField T>
T TransferStack<T>::tau_inv(const T& w, int k) const {
  const Interval<T>& iv = intervals_[k];
  return sigma_inv(T((w - iv.lo) / (iv.hi - iv.lo)));
}

template <ScalarField T>
T TransferStack<T>::w_eval(std::span<const T> x, int k) const {
  return tau(z_eval(x, k), k);
}

template <ScalarField T>
std::vector<T> TransferStack<T>::z_table(const std::vector<std::vector<T>>& points) const {
  const std::size_t n = points.size();
  const int blocks = num_blocks();
  std::vector<T> table(n * blocks);
  if constexpr (std::same_as<T, double>) {
    std::vector<double> ts(n), phivals(n), col(n);
    for (int k = 0; k < blocks; ++k) {
      const double shift = epsilon_ * static_cast<double>(k);
      double weight = lambda_;
      for (int j = 0; j < d_; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
          if (static_cast<int>(points[i].size()) != d_)
            throw ArgumentError("point has wrong dimension");
          const double c = points[i][j];
          if (c < 0.0 || c > 1.0)
            throw DomainError("coordinate " + format_number(c) + " outside [0, 1]");
          ts[i] = c + shift;
        }
        phi_.eval_many(ts.data(), phivals.data(), n);
        if (j == 0) {
          col = phivals;
        } else {
          kernels::axpy(weight, phivals.data(), col.data(), n);
          weight *= lambda_;
        }
      }
      for (std::size_t i = 0; i < n; ++i) table[i * blocks + k] = col[i];
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (int k = 0; k < blocks; ++k) table[i * blocks + k] = z_eval(points[i], k);
  }
  return table;
}

template <ScalarField T>
std::vector<T> TransferStack<T>::w_table(const std::vector<std::vector<T>>& points) const {
  std::vector<T> table = z_table(points);
  const int blocks = num_blocks();
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < blocks; ++k) table[i * blocks + k] = tau(table[i * blocks + k], k);
  return table;
}

template <ScalarField T>
TransferStack<T> default_stack(int d) {
  if (d < 2) throw ArgumentError("dimension d must be greater than 1");
  const int r = 2 * d;
  T lambda = T(1) / T(2);
  T epsilon = T(1) / T(4 * d);
  std::vector<Interval<T>> intervals;
  intervals.reserve(r + 1);
  for (int k = 0; k <= r; ++k) intervals.push_back({T(3 * k), T(3 * k + 1)});
  T domain_hi = T(1) + T(r) * epsilon;
  auto phi = InnerFunctionSpec<T>::hashed_piecewise_linear(kDefaultPhiSeed,
                                                           kDefaultPhiSegments, domain_hi);
  return TransferStack<T>(d, std::move(lambda), std::move(epsilon), std::move(phi),
                          std::move(intervals));
}

template class TransferStack<double>;
template class TransferStack<Rational>;
template TransferStack<double> default_stack<double>(int);
template TransferStack<Rational> default_stack<Rational>(int);

}  // namespace ksn
