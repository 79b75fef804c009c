#include "ksn/linalg_exact.hpp"

#include <algorithm>

#include "ksn/errors.hpp"

namespace ksn::exact {

namespace {

struct Echelon {
  std::vector<mpz_class> m;  // row-major echelon form
  int rows = 0;
  int cols = 0;
  std::vector<int> pivot_col;  // per pivot row
};

// Fraction-free (Bareiss) row echelon. Entries stay integral; the pivot of
// each step divides the next round exactly.
Echelon bareiss_echelon(std::vector<mpz_class> m, int rows, int cols) {
  Echelon e;
  e.rows = rows;
  e.cols = cols;
  auto at = [&](int i, int j) -> mpz_class& {
    return m[static_cast<std::size_t>(i) * cols + j];
  };
  mpz_class prev(1);
  int pr = 0;  // current pivot row
  for (int pc = 0; pc < cols && pr < rows; ++pc) {
    // partial pivoting: largest |entry| in this column at or below pr
    int best = -1;
    for (int i = pr; i < rows; ++i) {
      if (at(i, pc) == 0) continue;
      if (best < 0 || mpz_cmpabs(at(i, pc).get_mpz_t(), at(best, pc).get_mpz_t()) > 0)
        best = i;
    }
    if (best < 0) continue;  // free column
    if (best != pr)
      for (int j = 0; j < cols; ++j) std::swap(at(pr, j), at(best, j));
    const mpz_class pivot = at(pr, pc);
    for (int i = pr + 1; i < rows; ++i) {
      const mpz_class head = at(i, pc);
      for (int j = pc; j < cols; ++j) {
        mpz_class v = at(i, j) * pivot - head * at(pr, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        at(i, j) = v;
      }
    }
    prev = pivot;
    e.pivot_col.push_back(pc);
    ++pr;
  }
  e.m = std::move(m);
  return e;
}

void canonicalize_primitive(std::vector<mpz_class>& v) {
  mpz_class g(0);
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g > 1)
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  for (const auto& x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    break;
  }
}

}  // namespace

IntegerNullspace integer_nullspace(std::vector<mpz_class> m, int rows, int cols) {
  Echelon e = bareiss_echelon(std::move(m), rows, cols);
  IntegerNullspace out;
  out.rank = static_cast<int>(e.pivot_col.size());
  std::vector<bool> is_pivot(cols, false);
  for (int pc : e.pivot_col) is_pivot[pc] = true;

  auto at = [&](int i, int j) -> const mpz_class& {
    return e.m[static_cast<std::size_t>(i) * cols + j];
  };
  for (int fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    // back-substitute with x[fc] = 1, other free coordinates 0
    std::vector<Rational> x(cols, Rational(0));
    x[fc] = 1;
    for (int pi = out.rank - 1; pi >= 0; --pi) {
      const int pc = e.pivot_col[pi];
      Rational acc(0);
      for (int j = pc + 1; j < cols; ++j) {
        if (x[j] == 0) continue;
        acc += Rational(at(pi, j)) * x[j];
      }
      x[pc] = -acc / Rational(at(pi, pc));
    }
    // clear denominators
    mpz_class lcm(1);
    for (const auto& q : x) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
    std::vector<mpz_class> v(cols);
    for (int j = 0; j < cols; ++j) {
      Rational scaled = x[j] * Rational(lcm);
      v[j] = scaled.get_num();  // denominator is 1 after scaling
    }
    canonicalize_primitive(v);
    out.basis.push_back(std::move(v));
  }
  return out;
}

std::optional<std::vector<Rational>> solve_integer_system(const std::vector<std::int64_t>& g,
                                                          int n,
                                                          const std::vector<Rational>& b) {
  if (g.size() != static_cast<std::size_t>(n) * n || b.size() != static_cast<std::size_t>(n))
    throw ArgumentError("system shape mismatch");
  if (n == 0) return std::vector<Rational>{};

  // scale the right-hand side to integers
  mpz_class lcm(1);
  for (const auto& q : b) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());

  const int cols = n + 1;
  std::vector<mpz_class> m(static_cast<std::size_t>(n) * cols);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(i) * cols + j] = g[static_cast<std::size_t>(i) * n + j];
    Rational scaled = b[i] * Rational(lcm);
    m[static_cast<std::size_t>(i) * cols + n] = scaled.get_num();
  }

  Echelon e = bareiss_echelon(std::move(m), n, cols);
  // singular iff some pivot lies in the augmented column or rank < n
  if (static_cast<int>(e.pivot_col.size()) != n) return std::nullopt;
  for (int pc : e.pivot_col)
    if (pc >= n) return std::nullopt;

  auto at = [&](int i, int j) -> const mpz_class& {
    return e.m[static_cast<std::size_t>(i) * cols + j];
  };
  std::vector<Rational> y(n, Rational(0));
  for (int pi = n - 1; pi >= 0; --pi) {
    const int pc = e.pivot_col[pi];
    Rational acc = Rational(at(pi, n));
    for (int j = pc + 1; j < n; ++j) acc -= Rational(at(pi, j)) * y[j];
    y[pc] = acc / Rational(at(pi, pc));
  }
  for (auto& q : y) q /= Rational(lcm);
  return y;
}

}  // namespace ksn::exact
