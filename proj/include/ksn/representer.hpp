#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "ksn/condition_z.hpp"
#include "ksn/incidence.hpp"
#include "ksn/numeric.hpp"
#include "ksn/transfer_stack.hpp"

namespace ksn {

// Finite sample of the target function F on the unit cube. Duplicated
// points are representable here; fit reports them as a closed path.
template <ScalarField T>
struct SampleSet {
  int d = 0;
  std::vector<std::vector<T>> points;
  std::vector<T> values;

  void validate() const;
  std::size_t size() const { return points.size(); }
};

// Outer lookup function h_k as a finite partial function on w-values,
// extended by default_value off its key set.
template <ScalarField T>
struct LookupTable {
  int k = 0;
  std::vector<std::pair<T, T>> entries;  // (key, value), keys strictly increasing
  T default_value{};

  // exact key match (bitwise in float mode); nearest-key matching within
  // key_tolerance when it is positive
  const T* lookup(const T& key, const T& key_tolerance = T(0)) const;
  T value_or_default(const T& key, const T& key_tolerance = T(0)) const;
};

template <ScalarField T>
struct FitSuccess {
  std::vector<LookupTable<T>> tables;
  int rank = 0;  // == n
  IncidenceSystem system;
};

// A verified violation of Condition (Z) among the sampled points: the
// coefficients vanish outside `support` and are nonzero on it, and the
// grouped sums are zero in every block.
template <ScalarField T>
struct ClosedPathWitness {
  std::vector<int> support;  // ascending sample indices
  std::vector<T> coeffs;     // aligned with support
};

template <ScalarField T>
using FitResult = std::variant<FitSuccess<T>, ClosedPathWitness<T>>;

// Default float grouping tolerance 1e-12 * max(1, |a_k|, |b_k|); zero in
// rational mode.
template <ScalarField T>
T default_grouping_tolerance(const TransferStack<T>& stack);

// Solves sum_k h_k(w_k(x_j)) = F(x_j) for the lookup tables. The system is
// underdetermined in general; the minimum-norm solution is obtained from
// the Gram system (M^T M) y = F over the canonically sorted sample, after
// which each table value is the sum of y over its group. Exact in rational
// mode. Returns a ClosedPathWitness when the sample violates Condition (Z).
template <ScalarField T>
FitResult<T> fit(const TransferStack<T>& stack, const SampleSet<T>& sample,
                 const T& grouping_tolerance);
template <ScalarField T>
FitResult<T> fit(const TransferStack<T>& stack, const SampleSet<T>& sample);

// The annihilating functional: verifies that mu solves the grouped zero-sum
// equations on the given points (InvalidWitness otherwise), then returns
// sum_j mu_j * yhat(x_j) for the network defined by stack and tables.
// Exactly zero in rational mode for any tables.
template <ScalarField T>
T annihilate(const std::vector<std::vector<T>>& points, const std::vector<T>& mu,
             const TransferStack<T>& stack, const std::vector<LookupTable<T>>& tables,
             const T& grouping_tolerance);

template <ScalarField T>
struct ResidualReport {
  T max_abs_residual{};
  std::vector<int> table_sizes;
  int distinct_keys = 0;
};

template <ScalarField T>
ResidualReport<T> residual_report(const TransferStack<T>& stack,
                                  const std::vector<LookupTable<T>>& tables,
                                  const SampleSet<T>& sample);

extern template struct SampleSet<double>;
extern template struct SampleSet<Rational>;
extern template struct LookupTable<double>;
extern template struct LookupTable<Rational>;
extern template double default_grouping_tolerance<double>(const TransferStack<double>&);
extern template Rational default_grouping_tolerance<Rational>(const TransferStack<Rational>&);
extern template FitResult<double> fit<double>(const TransferStack<double>&,
                                              const SampleSet<double>&, const double&);
extern template FitResult<Rational> fit<Rational>(const TransferStack<Rational>&,
                                                  const SampleSet<Rational>&,
                                                  const Rational&);
extern template FitResult<double> fit<double>(const TransferStack<double>&,
                                              const SampleSet<double>&);
extern template FitResult<Rational> fit<Rational>(const TransferStack<Rational>&,
                                                  const SampleSet<Rational>&);
extern template double annihilate<double>(const std::vector<std::vector<double>>&,
                                          const std::vector<double>&,
                                          const TransferStack<double>&,
                                          const std::vector<LookupTable<double>>&,
                                          const double&);
extern template Rational annihilate<Rational>(const std::vector<std::vector<Rational>>&,
                                              const std::vector<Rational>&,
                                              const TransferStack<Rational>&,
                                              const std::vector<LookupTable<Rational>>&,
                                              const Rational&);
extern template ResidualReport<double> residual_report<double>(
    const TransferStack<double>&, const std::vector<LookupTable<double>>&,
    const SampleSet<double>&);
extern template ResidualReport<Rational> residual_report<Rational>(
    const TransferStack<Rational>&, const std::vector<LookupTable<Rational>>&,
    const SampleSet<Rational>&);

}  // namespace ksn
