#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ksn/numeric.hpp"

namespace ksn::exact {

struct IntegerNullspace {
  int rank = 0;
  // primitive integer basis vectors of the right nullspace, first nonzero
  // entry positive, ordered by free column
  std::vector<std::vector<mpz_class>> basis;
};

// Rank and right-nullspace basis of an integer matrix (row-major rows x cols)
// by fraction-free (Bareiss) elimination with partial pivoting.
IntegerNullspace integer_nullspace(std::vector<mpz_class> m, int rows, int cols);

// Exact solution of G y = b for square integer G; nullopt when G is singular.
std::optional<std::vector<Rational>> solve_integer_system(const std::vector<std::int64_t>& g,
                                                          int n,
                                                          const std::vector<Rational>& b);

}  // namespace ksn::exact
