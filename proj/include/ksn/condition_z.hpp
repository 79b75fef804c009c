#pragma once

#include <optional>
#include <vector>

#include "ksn/incidence.hpp"
#include "ksn/numeric.hpp"

namespace ksn {

template <ScalarField T>
struct ZReport {
  int n = 0;
  int rank = 0;
  int nullspace_dim = 0;
  bool solvable_for_all_F = false;  // rank == n
  bool z_satisfied = true;          // no all-nonzero nullspace vector
  // verified: incidence * witness = 0 and every entry nonzero
  std::optional<std::vector<T>> witness;
  bool rank_warning = false;  // float mode: smallest retained pivot near the cutoff
};

// Rank / nullspace analysis of the incidence system. Condition (Z) fails
// exactly when the nullspace contains a vector with all components nonzero,
// which happens iff no coordinate vanishes identically on the nullspace;
// the returned witness is a generic combination of basis vectors with
// prime-power weights (deterministic pseudo-random weights in float mode),
// re-verified entrywise before being returned.
template <ScalarField T>
ZReport<T> check_z(const IncidenceSystem& sys);

// Independent small-scale oracle (n <= 10): groups values pairwise, runs a
// textbook Gauss-Jordan reduction, and decides witness existence by
// maximizing |mu_j| per coordinate over exhaustive {0,1} combinations of the
// nullspace basis. Throws SizeError for n > 10.
template <ScalarField T>
ZReport<T> brute_force_z(const std::vector<T>& w_table, int n, int num_blocks,
                         const T& tolerance);

template <ScalarField T>
struct Violation {
  std::vector<int> subset;  // ascending point indices
  std::vector<T> witness;   // aligned with subset, all entries nonzero
};

// Smallest-cardinality subset of points admitting an all-nonzero witness,
// searched in lexicographic order over subsets of size 2..max_subset.
template <ScalarField T>
std::optional<Violation<T>> minimal_violation(const std::vector<T>& w_table, int n,
                                              int num_blocks, const T& tolerance,
                                              int max_subset);

template <>
ZReport<double> check_z<double>(const IncidenceSystem&);
template <>
ZReport<Rational> check_z<Rational>(const IncidenceSystem&);

extern template ZReport<double> brute_force_z<double>(const std::vector<double>&, int, int,
                                                      const double&);
extern template ZReport<Rational> brute_force_z<Rational>(const std::vector<Rational>&, int,
                                                          int, const Rational&);
extern template std::optional<Violation<double>> minimal_violation<double>(
    const std::vector<double>&, int, int, const double&, int);
extern template std::optional<Violation<Rational>> minimal_violation<Rational>(
    const std::vector<Rational>&, int, int, const Rational&, int);

}  // namespace ksn
