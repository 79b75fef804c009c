#include "ksn/representer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ksn/errors.hpp"
#include "ksn/linalg_exact.hpp"
#include "ksn/linalg_float.hpp"

namespace ksn {

template <ScalarField T>
void SampleSet<T>::validate() const {
  if (d < 2) throw ArgumentError("sample dimension must be greater than 1");
  if (points.size() != values.size())
    throw ArgumentError("points and values differ in length");
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != d) throw ArgumentError("point with wrong dimension");
    for (const T& c : p)
      if (c < T(0) || c > T(1))
        throw DomainError("coordinate " + format_number(c) + " outside [0, 1]");
  }
}

template <ScalarField T>
const T* LookupTable<T>::lookup(const T& key, const T& key_tolerance) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), key,
                             [](const std::pair<T, T>& e, const T& k) { return e.first < k; });
  if (it != entries.end() && it->first == key) return &it->second;
  if (key_tolerance > T(0)) {
    // nearest key within the tolerance; ties resolve to the smaller key
    const std::pair<T, T>* best = nullptr;
    T best_dist{};
    auto consider = [&](const std::pair<T, T>& e) {
      T dist = abs_value(T(e.first - key));
      if (dist <= key_tolerance && (!best || dist < best_dist)) {
        best = &e;
        best_dist = dist;
      }
    };
    if (it != entries.begin()) consider(*(it - 1));
    if (it != entries.end()) consider(*it);
    if (best) return &best->second;
  }
  return nullptr;
}

template <ScalarField T>
T LookupTable<T>::value_or_default(const T& key, const T& key_tolerance) const {
  const T* v = lookup(key, key_tolerance);
  return v ? *v : default_value;
}

template <ScalarField T>
T default_grouping_tolerance(const TransferStack<T>& stack) {
  if constexpr (is_exact_v<T>) {
    (void)stack;
    return Rational(0);
  } else {
    double scale = 1.0;
    for (const auto& iv : stack.intervals())
      scale = std::max({scale, std::fabs(iv.lo), std::fabs(iv.hi)});
    return 1e-12 * scale;
  }
}

namespace {

// canonical processing order: points sorted lexicographically by coordinates
template <ScalarField T>
std::vector<int> canonical_order(const SampleSet<T>& sample) {
  std::vector<int> order(sample.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::lexicographical_compare(sample.points[a].begin(), sample.points[a].end(),
                                        sample.points[b].begin(), sample.points[b].end());
  });
  return order;
}

// Gram matrix G[i][j] = number of blocks where points i and j share a group.
std::vector<std::int64_t> gram_from_groups(const IncidenceSystem& sys) {
  const int n = sys.n;
  std::vector<std::int64_t> g(static_cast<std::size_t>(n) * n, 0);
  for (const auto& groups : sys.blocks)
    for (const auto& group : groups)
      for (int a : group)
        for (int b : group) g[static_cast<std::size_t>(a) * n + b] += 1;
  return g;
}

template <ScalarField T>
ClosedPathWitness<T> witness_from_vector(const std::vector<int>& order,
                                         const std::vector<T>& mu_sorted) {
  double nonzero_floor = 0;
  if constexpr (!is_exact_v<T>) {
    double maxabs = 0;
    for (const auto& v : mu_sorted) maxabs = std::max(maxabs, std::fabs(v));
    nonzero_floor = 1e-9 * std::max(1.0, maxabs);
  }
  // restrict to the support and map back to original sample indices
  std::vector<std::pair<int, T>> entries;
  for (std::size_t s = 0; s < mu_sorted.size(); ++s) {
    bool nonzero;
    if constexpr (is_exact_v<T>) {
      nonzero = mu_sorted[s] != T(0);
    } else {
      nonzero = std::fabs(mu_sorted[s]) > nonzero_floor;
    }
    if (nonzero) entries.emplace_back(order[s], mu_sorted[s]);
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  ClosedPathWitness<T> w;
  for (auto& [idx, c] : entries) {
    w.support.push_back(idx);
    w.coeffs.push_back(std::move(c));
  }
  // canonical sign: leading coefficient positive
  if (!w.coeffs.empty() && w.coeffs.front() < T(0))
    for (auto& c : w.coeffs) c = -c;
  return w;
}

// smallest-support nullspace vector as the reported closed path
template <ScalarField T>
ClosedPathWitness<T> deficiency_witness(const IncidenceSystem& sys,
                                        const std::vector<int>& order);

template <>
ClosedPathWitness<Rational> deficiency_witness(const IncidenceSystem& sys,
                                               const std::vector<int>& order) {
  std::vector<std::int8_t> dense = sys.dense();
  std::vector<mpz_class> m(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) m[i] = static_cast<long>(dense[i]);
  auto ns = exact::integer_nullspace(std::move(m), sys.total_rows(), sys.n);
  if (ns.basis.empty())
    throw Error("rank deficiency reported but the nullspace is trivial");
  const std::vector<mpz_class>* best = nullptr;
  std::size_t best_support = 0;
  for (const auto& b : ns.basis) {
    std::size_t support = 0;
    for (const auto& v : b)
      if (v != 0) ++support;
    if (!best || support < best_support) {
      best = &b;
      best_support = support;
    }
  }
  std::vector<Rational> mu(sys.n, Rational(0));
  for (int j = 0; j < sys.n; ++j) mu[j] = Rational((*best)[j]);
  return witness_from_vector<Rational>(order, mu);
}

template <>
ClosedPathWitness<double> deficiency_witness(const IncidenceSystem& sys,
                                             const std::vector<int>& order) {
  std::vector<std::int8_t> dense = sys.dense();
  std::vector<double> m(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) m[i] = dense[i];
  auto ge = fl::ge_rank_nullspace(std::move(m), sys.total_rows(), sys.n);
  if (ge.nullspace.empty())
    throw Error("rank deficiency reported but the nullspace is trivial");
  const std::vector<double>* best = nullptr;
  std::size_t best_support = 0;
  for (const auto& b : ge.nullspace) {
    double maxabs = 0;
    for (double v : b) maxabs = std::max(maxabs, std::fabs(v));
    std::size_t support = 0;
    for (double v : b)
      if (std::fabs(v) > 1e-9 * std::max(1.0, maxabs)) ++support;
    if (!best || support < best_support) {
      best = &b;
      best_support = support;
    }
  }
  return witness_from_vector<double>(order, *best);
}

template <ScalarField T>
std::optional<std::vector<T>> solve_gram(const std::vector<std::int64_t>& gram, int n,
                                         const std::vector<T>& f, int num_blocks);

template <>
std::optional<std::vector<Rational>> solve_gram(const std::vector<std::int64_t>& gram, int n,
                                                const std::vector<Rational>& f,
                                                int /*num_blocks*/) {
  return exact::solve_integer_system(gram, n, f);
}

template <>
std::optional<std::vector<double>> solve_gram(const std::vector<std::int64_t>& gram, int n,
                                              const std::vector<double>& f, int num_blocks) {
  std::vector<double> g(gram.size());
  for (std::size_t i = 0; i < gram.size(); ++i) g[i] = static_cast<double>(gram[i]);
  // diagonal entries equal the block count; rank deficiency collapses a
  // pivot to roundoff level, far below this relative cutoff
  const double cutoff = 1e-8 * num_blocks;
  return fl::ldlt_solve(std::move(g), n, f, cutoff);
}

}  // namespace

template <ScalarField T>
FitResult<T> fit(const TransferStack<T>& stack, const SampleSet<T>& sample,
                 const T& grouping_tolerance) {
  sample.validate();
  if (sample.size() == 0) throw ArgumentError("cannot fit an empty sample");
  if (sample.d != stack.d()) throw ArgumentError("sample and stack dimension mismatch");
  const int n = static_cast<int>(sample.size());
  const int blocks = stack.num_blocks();

  const std::vector<int> order = canonical_order(sample);
  std::vector<std::vector<T>> pts(n);
  std::vector<T> f(n);
  for (int s = 0; s < n; ++s) {
    pts[s] = sample.points[order[s]];
    f[s] = sample.values[order[s]];
  }

  const std::vector<T> wtab = stack.w_table(pts);
  IncidenceSystem sys = build_incidence<T>(wtab, n, blocks, grouping_tolerance);

  // generating-point unicity: identical w-rows always defeat the fit
  if (auto dup = sys.duplicate_pair()) {
    ClosedPathWitness<T> w;
    int a = order[dup->first], b = order[dup->second];
    if (a > b) std::swap(a, b);
    w.support = {a, b};
    w.coeffs = {T(1), T(-1)};
    return w;
  }

  const std::vector<std::int64_t> gram = gram_from_groups(sys);
  auto y = solve_gram<T>(gram, n, f, blocks);
  if (!y) return deficiency_witness<T>(sys, order);

  std::vector<LookupTable<T>> tables(blocks);
  for (int k = 0; k < blocks; ++k) {
    tables[k].k = k;
    tables[k].default_value = T(0);
    auto& entries = tables[k].entries;
    for (const auto& group : sys.blocks[k]) {
      T h(0);
      for (int j : group) h += (*y)[j];
      if constexpr (is_exact_v<T>) {
        entries.emplace_back(wtab[static_cast<std::size_t>(group.front()) * blocks + k], h);
      } else {
        // one entry per distinct float value so bitwise lookups always hit
        std::vector<double> vals;
        vals.reserve(group.size());
        for (int j : group) vals.push_back(wtab[static_cast<std::size_t>(j) * blocks + k]);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        for (double v : vals) entries.emplace_back(v, h);
      }
    }
  }

  FitSuccess<T> success;
  success.tables = std::move(tables);
  success.rank = n;
  success.system = std::move(sys);
  return success;
}

template <ScalarField T>
FitResult<T> fit(const TransferStack<T>& stack, const SampleSet<T>& sample) {
  return fit(stack, sample, default_grouping_tolerance(stack));
}

template <ScalarField T>
T annihilate(const std::vector<std::vector<T>>& points, const std::vector<T>& mu,
             const TransferStack<T>& stack, const std::vector<LookupTable<T>>& tables,
             const T& grouping_tolerance) {
  if (points.size() != mu.size()) throw ArgumentError("points and mu differ in length");
  if (static_cast<int>(tables.size()) != stack.num_blocks())
    throw ArgumentError("expected one table per block");
  const int n = static_cast<int>(points.size());
  const int blocks = stack.num_blocks();
  for (const T& c : mu)
    if (c == T(0)) throw InvalidWitness("witness has a zero coefficient");

  const std::vector<T> wtab = stack.w_table(points);
  IncidenceSystem sys = build_incidence<T>(wtab, n, blocks, grouping_tolerance);
  for (const auto& groups : sys.blocks)
    for (const auto& group : groups) {
      T sum(0);
      for (int j : group) sum += mu[j];
      bool zero;
      if constexpr (is_exact_v<T>) {
        zero = sum == T(0);
      } else {
        double scale = 0;
        for (const T& c : mu) scale += std::fabs(c);
        zero = std::fabs(sum) <= 1e-9 * std::max(1.0, scale);
      }
      if (!zero)
        throw InvalidWitness("coefficients do not annihilate the grouped point masses");
    }

  T out(0);
  for (int j = 0; j < n; ++j) {
    T yhat(0);
    for (int k = 0; k < blocks; ++k)
      yhat += tables[k].value_or_default(wtab[static_cast<std::size_t>(j) * blocks + k]);
    out += mu[j] * yhat;
  }
  return out;
}

template <ScalarField T>
ResidualReport<T> residual_report(const TransferStack<T>& stack,
                                  const std::vector<LookupTable<T>>& tables,
                                  const SampleSet<T>& sample) {
  if (static_cast<int>(tables.size()) != stack.num_blocks())
    throw ArgumentError("expected one table per block");
  ResidualReport<T> report;
  report.max_abs_residual = T(0);
  for (const auto& t : tables) {
    report.table_sizes.push_back(static_cast<int>(t.entries.size()));
    report.distinct_keys += static_cast<int>(t.entries.size());
  }
  if (sample.size() == 0) return report;
  sample.validate();
  const int n = static_cast<int>(sample.size());
  const int blocks = stack.num_blocks();
  const std::vector<T> wtab = stack.w_table(sample.points);
  for (int j = 0; j < n; ++j) {
    T yhat(0);
    for (int k = 0; k < blocks; ++k)
      yhat += tables[k].value_or_default(wtab[static_cast<std::size_t>(j) * blocks + k]);
    T res = abs_value(T(yhat - sample.values[j]));
    if (res > report.max_abs_residual) report.max_abs_residual = res;
  }
  return report;
}

template struct SampleSet<double>;
template struct SampleSet<Rational>;
template struct LookupTable<double>;
template struct LookupTable<Rational>;
template double default_grouping_tolerance<double>(const TransferStack<double>&);
template Rational default_grouping_tolerance<Rational>(const TransferStack<Rational>&);
template FitResult<double> fit<double>(const TransferStack<double>&, const SampleSet<double>&,
                                       const double&);
template FitResult<Rational> fit<Rational>(const TransferStack<Rational>&,
                                           const SampleSet<Rational>&, const Rational&);
template FitResult<double> fit<double>(const TransferStack<double>&, const SampleSet<double>&);
template FitResult<Rational> fit<Rational>(const TransferStack<Rational>&,
                                           const SampleSet<Rational>&);
template double annihilate<double>(const std::vector<std::vector<double>>&,
                                   const std::vector<double>&, const TransferStack<double>&,
                                   const std::vector<LookupTable<double>>&, const double&);
template Rational annihilate<Rational>(const std::vector<std::vector<Rational>>&,
                                       const std::vector<Rational>&,
                                       const TransferStack<Rational>&,
                                       const std::vector<LookupTable<Rational>>&,
                                       const Rational&);
template ResidualReport<double> residual_report<double>(const TransferStack<double>&,
                                                        const std::vector<LookupTable<double>>&,
                                                        const SampleSet<double>&);
template ResidualReport<Rational> residual_report<Rational>(
    const TransferStack<Rational>&, const std::vector<LookupTable<Rational>>&,
    const SampleSet<Rational>&);

}  // namespace ksn
