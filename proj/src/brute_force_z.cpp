// Small-scale oracle for Condition (Z). Deliberately shares no code with
// check_z: grouping is pairwise union-find instead of sort-and-scan, the
// reduction is a textbook Gauss-Jordan RREF instead of fraction-free
// elimination, and witness existence is decided by exhaustively maximizing
// |mu_j| over {0,1}-weighted basis combinations.

#include <cmath>
#include <vector>

#include "ksn/condition_z.hpp"
#include "ksn/errors.hpp"

namespace ksn {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

template <ScalarField T>
bool values_equal(const T& a, const T& b, const T& tolerance) {
  if constexpr (is_exact_v<T>) {
    return a == b;
  } else {
    return std::fabs(a - b) <= tolerance;
  }
}

// rows of the expanded system, one per group per block
template <ScalarField T>
std::vector<std::vector<T>> expand_rows(const std::vector<T>& table, int n, int num_blocks,
                                        const T& tolerance) {
  std::vector<std::vector<T>> rows;
  for (int k = 0; k < num_blocks; ++k) {
    UnionFind uf(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (values_equal(table[static_cast<std::size_t>(i) * num_blocks + k],
                         table[static_cast<std::size_t>(j) * num_blocks + k], tolerance))
          uf.unite(i, j);
    std::vector<int> root_row(n, -1);
    for (int i = 0; i < n; ++i) {
      int root = uf.find(i);
      if (root_row[root] < 0) {
        root_row[root] = static_cast<int>(rows.size());
        rows.emplace_back(n, T(0));
      }
      rows[root_row[root]][i] = T(1);
    }
  }
  return rows;
}

// Gauss-Jordan to reduced row echelon form; returns pivot columns.
template <ScalarField T>
std::vector<int> rref(std::vector<std::vector<T>>& rows, int cols) {
  std::vector<int> pivot_cols;
  int pr = 0;
  const int nrows = static_cast<int>(rows.size());
  for (int pc = 0; pc < cols && pr < nrows; ++pc) {
    int best = -1;
    if constexpr (is_exact_v<T>) {
      for (int i = pr; i < nrows; ++i)
        if (rows[i][pc] != 0) {
          best = i;
          break;
        }
    } else {
      double best_abs = 1e-9;
      for (int i = pr; i < nrows; ++i)
        if (std::fabs(rows[i][pc]) > best_abs) {
          best_abs = std::fabs(rows[i][pc]);
          best = i;
        }
    }
    if (best < 0) continue;
    std::swap(rows[pr], rows[best]);
    T inv_pivot = T(1) / rows[pr][pc];
    for (int j = 0; j < cols; ++j) rows[pr][j] = T(rows[pr][j] * inv_pivot);
    for (int i = 0; i < nrows; ++i) {
      if (i == pr) continue;
      T factor = rows[i][pc];
      if (factor == T(0)) continue;
      for (int j = 0; j < cols; ++j) rows[i][j] -= factor * rows[pr][j];
    }
    pivot_cols.push_back(pc);
    ++pr;
  }
  return pivot_cols;
}

template <ScalarField T>
bool entry_nonzero(const T& v) {
  if constexpr (is_exact_v<T>) {
    return v != T(0);
  } else {
    return std::fabs(v) > 1e-9;
  }
}

}  // namespace

template <ScalarField T>
ZReport<T> brute_force_z(const std::vector<T>& w_table, int n, int num_blocks,
                         const T& tolerance) {
  if (n > 10) throw SizeError("brute_force_z handles at most 10 points");
  if (n < 0 || w_table.size() != static_cast<std::size_t>(n) * num_blocks)
    throw ArgumentError("w-table shape mismatch");

  ZReport<T> report;
  report.n = n;
  if (n == 0) {
    report.solvable_for_all_F = true;
    report.z_satisfied = true;
    return report;
  }

  auto rows = expand_rows(w_table, n, num_blocks, tolerance);
  std::vector<int> pivot_cols = rref(rows, n);
  report.rank = static_cast<int>(pivot_cols.size());
  report.nullspace_dim = n - report.rank;
  report.solvable_for_all_F = report.rank == n;

  // nullspace basis from the RREF: one vector per free column
  std::vector<bool> is_pivot(n, false);
  for (int pc : pivot_cols) is_pivot[pc] = true;
  std::vector<std::vector<T>> basis;
  for (int fc = 0; fc < n; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<T> v(n, T(0));
    v[fc] = T(1);
    for (std::size_t pi = 0; pi < pivot_cols.size(); ++pi) v[pivot_cols[pi]] = T(-rows[pi][fc]);
    basis.push_back(std::move(v));
  }

  const int m = static_cast<int>(basis.size());
  if (m == 0) {
    report.z_satisfied = true;
    return report;
  }

  // per-coordinate maxima over all {0,1} weightings of the basis
  std::vector<T> best(n, T(0));
  std::vector<T> best_all_nonzero;
  for (unsigned long mask = 1; mask < (1UL << m); ++mask) {
    std::vector<T> mu(n, T(0));
    for (int i = 0; i < m; ++i)
      if (mask & (1UL << i))
        for (int j = 0; j < n; ++j) mu[j] += basis[i][j];
    bool all_nonzero = true;
    for (int j = 0; j < n; ++j) {
      T a = abs_value(mu[j]);
      if (a > best[j]) best[j] = a;
      if (!entry_nonzero(mu[j])) all_nonzero = false;
    }
    if (all_nonzero && best_all_nonzero.empty()) best_all_nonzero = mu;
  }
  bool violated = true;
  for (int j = 0; j < n; ++j)
    if (!entry_nonzero(best[j])) violated = false;
  report.z_satisfied = !violated;
  if (!violated) return report;

  if (!best_all_nonzero.empty()) {
    report.witness = std::move(best_all_nonzero);
    return report;
  }
  // The grid decided existence but no grid point was itself all-nonzero:
  // fall back to integer-weight combinations t^i, verified entrywise.
  for (long t = 2; t < 1000; ++t) {
    std::vector<T> mu(n, T(0));
    T weight(1);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) mu[j] += weight * basis[i][j];
      weight *= T(t);
    }
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) ok = entry_nonzero(mu[j]);
    if (ok) {
      report.witness = std::move(mu);
      return report;
    }
  }
  throw Error("brute-force witness construction did not converge");
}

template ZReport<double> brute_force_z<double>(const std::vector<double>&, int, int,
                                               const double&);
template ZReport<Rational> brute_force_z<Rational>(const std::vector<Rational>&, int, int,
                                                   const Rational&);

}  // namespace ksn
