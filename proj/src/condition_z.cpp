#include "ksn/condition_z.hpp"

#include <algorithm>
#include <cmath>

#include "ksn/errors.hpp"
#include "ksn/linalg_exact.hpp"
#include "ksn/linalg_float.hpp"

namespace ksn {

namespace {

constexpr double kFloatNonzeroFloor = 1e-9;
constexpr double kFloatResidualTol = 1e-8;

void next_prime(long& p) {
  auto is_prime = [](long v) {
    for (long q = 2; q * q <= v; ++q)
      if (v % q == 0) return false;
    return true;
  };
  do {
    ++p;
  } while (!is_prime(p));
}

// multiplies incidence * mu exactly over the group structure
template <class V>
bool groups_annihilate_exact(const IncidenceSystem& sys, const std::vector<V>& mu) {
  for (const auto& groups : sys.blocks)
    for (const auto& group : groups) {
      V sum(0);
      for (int j : group) sum += mu[j];
      if (sum != 0) return false;
    }
  return true;
}

bool groups_annihilate_float(const IncidenceSystem& sys, const std::vector<double>& mu,
                             double tol) {
  for (const auto& groups : sys.blocks)
    for (const auto& group : groups) {
      double sum = 0;
      for (int j : group) sum += mu[j];
      if (std::fabs(sum) > tol) return false;
    }
  return true;
}

std::optional<std::vector<mpz_class>> all_nonzero_combination_exact(
    const IncidenceSystem& sys, const std::vector<std::vector<mpz_class>>& basis) {
  const int n = sys.n;
  const int m = static_cast<int>(basis.size());
  if (m == 0) return std::nullopt;
  for (int j = 0; j < n; ++j) {
    bool hit = false;
    for (const auto& b : basis)
      if (b[j] != 0) {
        hit = true;
        break;
      }
    if (!hit) return std::nullopt;  // coordinate vanishes on the whole nullspace
  }
  long t = 1;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    next_prime(t);
    std::vector<mpz_class> mu(n, mpz_class(0));
    mpz_class weight(1);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) mu[j] += weight * basis[i][j];
      weight *= t;
    }
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) ok = mu[j] != 0;
    if (ok && groups_annihilate_exact(sys, mu)) {
      mpz_class g(0);
      for (const auto& x : mu) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
      if (g > 1)
        for (auto& x : mu) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
      if (mu[0] < 0)
        for (auto& x : mu) x = -x;
      return mu;
    }
  }
  throw Error("witness construction did not converge");
}

std::optional<std::vector<double>> all_nonzero_combination_float(
    const IncidenceSystem& sys, const std::vector<std::vector<double>>& basis) {
  const int n = sys.n;
  const int m = static_cast<int>(basis.size());
  if (m == 0) return std::nullopt;
  for (int j = 0; j < n; ++j) {
    bool hit = false;
    for (const auto& b : basis)
      if (std::fabs(b[j]) > kFloatNonzeroFloor) {
        hit = true;
        break;
      }
    if (!hit) return std::nullopt;
  }
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> mu(n, 0.0);
    for (int i = 0; i < m; ++i) {
      const double weight = 1.0 + mix64_unit_double(0xC0FFEEULL + attempt, i);
      for (int j = 0; j < n; ++j) mu[j] = std::fma(weight, basis[i][j], mu[j]);
    }
    double maxabs = 0;
    for (double v : mu) maxabs = std::max(maxabs, std::fabs(v));
    const double floor = kFloatNonzeroFloor * std::max(1.0, maxabs);
    bool ok = maxabs > 0;
    for (int j = 0; j < n && ok; ++j) ok = std::fabs(mu[j]) > floor;
    if (ok && groups_annihilate_float(sys, mu, kFloatResidualTol * std::max(1.0, maxabs)))
      return mu;
  }
  throw Error("witness construction did not converge");
}

}  // namespace

template <>
ZReport<Rational> check_z<Rational>(const IncidenceSystem& sys) {
  ZReport<Rational> report;
  report.n = sys.n;
  const int s = sys.total_rows();
  std::vector<std::int8_t> dense = sys.dense();
  std::vector<mpz_class> m(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) m[i] = static_cast<long>(dense[i]);
  exact::IntegerNullspace ns = exact::integer_nullspace(std::move(m), s, sys.n);
  report.rank = ns.rank;
  report.nullspace_dim = sys.n - ns.rank;
  report.solvable_for_all_F = ns.rank == sys.n;
  auto mu = all_nonzero_combination_exact(sys, ns.basis);
  report.z_satisfied = !mu.has_value();
  if (mu) {
    std::vector<Rational> w(mu->size());
    for (std::size_t j = 0; j < mu->size(); ++j) w[j] = Rational((*mu)[j]);
    report.witness = std::move(w);
  }
  return report;
}

template <>
ZReport<double> check_z<double>(const IncidenceSystem& sys) {
  ZReport<double> report;
  report.n = sys.n;
  const int s = sys.total_rows();
  std::vector<std::int8_t> dense = sys.dense();
  std::vector<double> m(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) m[i] = dense[i];
  fl::GeResult ge = fl::ge_rank_nullspace(std::move(m), s, sys.n);
  report.rank = ge.rank;
  report.nullspace_dim = sys.n - ge.rank;
  report.solvable_for_all_F = ge.rank == sys.n;
  report.rank_warning = ge.rank_warning;
  auto mu = all_nonzero_combination_float(sys, ge.nullspace);
  report.z_satisfied = !mu.has_value();
  if (mu) report.witness = std::move(*mu);
  return report;
}

namespace {

template <ScalarField T>
std::vector<T> restrict_table(const std::vector<T>& table, int num_blocks,
                              const std::vector<int>& subset) {
  std::vector<T> sub(subset.size() * num_blocks);
  for (std::size_t i = 0; i < subset.size(); ++i)
    for (int k = 0; k < num_blocks; ++k)
      sub[i * num_blocks + k] = table[static_cast<std::size_t>(subset[i]) * num_blocks + k];
  return sub;
}

}  // namespace

template <ScalarField T>
std::optional<Violation<T>> minimal_violation(const std::vector<T>& w_table, int n,
                                              int num_blocks, const T& tolerance,
                                              int max_subset) {
  if (max_subset > 12) throw ArgumentError("max_subset must be at most 12");
  if (n < 0 || w_table.size() != static_cast<std::size_t>(n) * num_blocks)
    throw ArgumentError("w-table shape mismatch");
  const int limit = std::min(n, max_subset);
  std::vector<int> subset;
  for (int size = 2; size <= limit; ++size) {
    subset.assign(size, 0);
    for (int i = 0; i < size; ++i) subset[i] = i;
    while (true) {
      std::vector<T> sub = restrict_table(w_table, num_blocks, subset);
      IncidenceSystem sys = build_incidence<T>(sub, size, num_blocks, tolerance);
      ZReport<T> report = check_z<T>(sys);
      if (!report.z_satisfied) {
        Violation<T> v;
        v.subset = subset;
        v.witness = std::move(*report.witness);
        return v;
      }
      // next lexicographic combination
      int i = size - 1;
      while (i >= 0 && subset[i] == n - size + i) --i;
      if (i < 0) break;
      ++subset[i];
      for (int j = i + 1; j < size; ++j) subset[j] = subset[j - 1] + 1;
    }
  }
  return std::nullopt;
}

template std::optional<Violation<double>> minimal_violation<double>(const std::vector<double>&,
                                                                    int, int, const double&,
                                                                    int);
template std::optional<Violation<Rational>> minimal_violation<Rational>(
    const std::vector<Rational>&, int, int, const Rational&, int);

}  // namespace ksn
