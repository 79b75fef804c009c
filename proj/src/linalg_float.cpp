#include "ksn/linalg_float.hpp"

#include <cfloat>
#include <cmath>

#include "ksn/errors.hpp"
#include "ksn/kernels.hpp"

namespace ksn::fl {

GeResult ge_rank_nullspace(std::vector<double> m, int rows, int cols) {
  if (m.size() != static_cast<std::size_t>(rows) * cols)
    throw ArgumentError("matrix shape mismatch");
  GeResult res;
  auto row_ptr = [&](int i) { return m.data() + static_cast<std::size_t>(i) * cols; };

  const double max_entry = kernels::max_abs(m.data(), m.size());
  res.cutoff = std::max(rows, cols) * DBL_EPSILON * std::max(1.0, max_entry);

  std::vector<int> pivot_cols;
  double smallest = 0;
  int pr = 0;
  for (int pc = 0; pc < cols && pr < rows; ++pc) {
    int best = pr;
    double best_abs = std::fabs(row_ptr(pr)[pc]);
    for (int i = pr + 1; i < rows; ++i) {
      const double a = std::fabs(row_ptr(i)[pc]);
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (best_abs <= res.cutoff) continue;  // treat as a free column
    if (best != pr)
      for (int j = 0; j < cols; ++j) std::swap(row_ptr(pr)[j], row_ptr(best)[j]);
    const double pivot = row_ptr(pr)[pc];
    for (int i = pr + 1; i < rows; ++i) {
      const double head = row_ptr(i)[pc];
      if (head == 0.0) continue;
      const double factor = -head / pivot;
      kernels::axpy(factor, row_ptr(pr) + pc, row_ptr(i) + pc, cols - pc);
      row_ptr(i)[pc] = 0.0;
    }
    if (smallest == 0 || best_abs < smallest) smallest = best_abs;
    pivot_cols.push_back(pc);
    ++pr;
  }

  res.rank = static_cast<int>(pivot_cols.size());
  res.smallest_retained_pivot = smallest;
  res.rank_warning = res.rank > 0 && smallest < 1e3 * res.cutoff;

  std::vector<bool> is_pivot(cols, false);
  for (int pc : pivot_cols) is_pivot[pc] = true;
  for (int fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<double> x(cols, 0.0);
    x[fc] = 1.0;
    for (int pi = res.rank - 1; pi >= 0; --pi) {
      const int pc = pivot_cols[pi];
      double acc = 0.0;
      for (int j = pc + 1; j < cols; ++j) acc = std::fma(row_ptr(pi)[j], x[j], acc);
      x[pc] = -acc / row_ptr(pi)[pc];
    }
    res.nullspace.push_back(std::move(x));
  }
  return res;
}

std::optional<std::vector<double>> ldlt_solve(std::vector<double> g, int n,
                                              std::vector<double> b, double pivot_cutoff) {
  if (g.size() != static_cast<std::size_t>(n) * n || b.size() != static_cast<std::size_t>(n))
    throw ArgumentError("system shape mismatch");
  auto row_ptr = [&](int i) { return g.data() + static_cast<std::size_t>(i) * n; };
  std::vector<double> d(n, 0.0);
  std::vector<double> w(n, 0.0);  // column j of L scaled by d

  // In-place LDL^T: strictly-lower part of g becomes L.
  for (int j = 0; j < n; ++j) {
    double* rj = row_ptr(j);
    for (int k = 0; k < j; ++k) w[k] = rj[k] * d[k];
    const double dj = rj[j] - kernels::dot(rj, w.data(), j);
    if (!(dj > pivot_cutoff)) return std::nullopt;
    d[j] = dj;
    for (int i = j + 1; i < n; ++i) {
      double* ri = row_ptr(i);
      ri[j] = (ri[j] - kernels::dot(ri, w.data(), j)) / dj;
    }
  }

  // forward solve L c = b
  for (int i = 0; i < n; ++i) {
    b[i] -= kernels::dot(row_ptr(i), b.data(), i);
  }
  // diagonal
  for (int i = 0; i < n; ++i) b[i] /= d[i];
  // back solve L^T y = c
  for (int i = n - 1; i >= 0; --i) {
    double acc = b[i];
    for (int k = i + 1; k < n; ++k) acc = std::fma(-row_ptr(k)[i], b[k], acc);
    b[i] = acc;
  }
  return b;
}

}  // namespace ksn::fl
