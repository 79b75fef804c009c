#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ksn/numeric.hpp"

namespace ksn {

// The expanded homogeneous system: one 0/1 row per distinct w-value per
// block, asserting that the coefficients of the points sharing that value
// sum to zero. Stored as the group structure; rows can be materialized.
struct IncidenceSystem {
  int n = 0;           // points (columns)
  int num_blocks = 0;  // r + 1
  // blocks[k] = groups of point indices sharing a w_k value, groups ordered
  // by ascending value, indices ascending within each group
  std::vector<std::vector<std::vector<int>>> blocks;
  // group_of[k][j] = index of the group of point j within block k
  std::vector<std::vector<int>> group_of;

  std::vector<int> s_k() const;  // distinct values per block
  int total_rows() const;        // s = sum of s_k
  std::vector<std::int8_t> dense() const;  // s x n row-major 0/1 matrix

  // First pair of points (lexicographically smallest) grouped together in
  // every block, i.e. points with identical w-rows up to grouping.
  std::optional<std::pair<int, int>> duplicate_pair() const;

  bool operator==(const IncidenceSystem&) const = default;
};

// Groups each column of the row-major n x num_blocks table. In exact mode
// the tolerance must be zero and grouping is by equality. In float mode
// consecutive sorted values with gap <= tolerance join one group; a gap
// strictly inside (tolerance, 10*tolerance) throws GroupingAmbiguity.
template <ScalarField T>
IncidenceSystem build_incidence(const std::vector<T>& table, int n, int num_blocks,
                                const T& tolerance);

extern template IncidenceSystem build_incidence<double>(const std::vector<double>&, int, int,
                                                        const double&);
extern template IncidenceSystem build_incidence<Rational>(const std::vector<Rational>&, int,
                                                          int, const Rational&);

}  // namespace ksn
