#pragma once

#include <optional>
#include <vector>

namespace ksn::fl {

struct GeResult {
  int rank = 0;
  double cutoff = 0;                  // pivot magnitude below which a column is free
  double smallest_retained_pivot = 0; // 0 when rank is 0
  bool rank_warning = false;          // smallest retained pivot within 1e3 of cutoff
  std::vector<std::vector<double>> nullspace;
};

// Gaussian elimination with partial pivoting; rank by pivot threshold,
// right-nullspace basis by back-substitution. Row operations run through
// the axpy kernel.
GeResult ge_rank_nullspace(std::vector<double> m, int rows, int cols);

// LDL^T solve for a symmetric positive semidefinite matrix (row-major,
// destroyed). Returns nullopt as soon as a pivot falls at or below
// pivot_cutoff, which signals rank deficiency.
std::optional<std::vector<double>> ldlt_solve(std::vector<double> g, int n,
                                              std::vector<double> b, double pivot_cutoff);

}  // namespace ksn::fl
