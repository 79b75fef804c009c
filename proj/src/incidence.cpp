#include "ksn/incidence.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "ksn/errors.hpp"

namespace ksn {

std::vector<int> IncidenceSystem::s_k() const {
  std::vector<int> out(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) out[k] = static_cast<int>(blocks[k].size());
  return out;
}

int IncidenceSystem::total_rows() const {
  int s = 0;
  for (const auto& groups : blocks) s += static_cast<int>(groups.size());
  return s;
}

std::vector<std::int8_t> IncidenceSystem::dense() const {
  const int s = total_rows();
  std::vector<std::int8_t> m(static_cast<std::size_t>(s) * n, 0);
  int row = 0;
  for (const auto& groups : blocks)
    for (const auto& group : groups) {
      for (int j : group) m[static_cast<std::size_t>(row) * n + j] = 1;
      ++row;
    }
  return m;
}

std::optional<std::pair<int, int>> IncidenceSystem::duplicate_pair() const {
  // signature of a point = its group index in every block
  std::map<std::vector<int>, int> seen;
  std::vector<int> sig(num_blocks);
  std::optional<std::pair<int, int>> best;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < num_blocks; ++k) sig[k] = group_of[k][j];
    auto [it, inserted] = seen.emplace(sig, j);
    if (!inserted) {
      std::pair<int, int> cand{it->second, j};
      if (!best || cand < *best) best = cand;
    }
  }
  return best;
}

template <ScalarField T>
IncidenceSystem build_incidence(const std::vector<T>& table, int n, int num_blocks,
                                const T& tolerance) {
  if (n < 0 || num_blocks < 0 || table.size() != static_cast<std::size_t>(n) * num_blocks)
    throw ArgumentError("w-table shape mismatch");
  if (tolerance < T(0)) throw ArgumentError("grouping tolerance must be nonnegative");
  if constexpr (is_exact_v<T>) {
    if (tolerance != T(0))
      throw ArgumentError("grouping tolerance must be zero in exact rational mode");
  }

  IncidenceSystem sys;
  sys.n = n;
  sys.num_blocks = num_blocks;
  sys.blocks.resize(num_blocks);
  sys.group_of.assign(num_blocks, std::vector<int>(n, -1));

  std::vector<int> order(n);
  for (int k = 0; k < num_blocks; ++k) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return table[static_cast<std::size_t>(a) * num_blocks + k] <
             table[static_cast<std::size_t>(b) * num_blocks + k];
    });
    auto value_at = [&](int j) -> const T& {
      return table[static_cast<std::size_t>(j) * num_blocks + k];
    };
    auto& groups = sys.blocks[k];
    for (int pos = 0; pos < n; ++pos) {
      bool new_group = true;
      if (pos > 0) {
        const T gap = T(value_at(order[pos]) - value_at(order[pos - 1]));
        if constexpr (is_exact_v<T>) {
          new_group = gap != T(0);
        } else {
          if (gap > tolerance && gap < 10.0 * tolerance)
            throw GroupingAmbiguity(k, gap, tolerance);
          new_group = gap > tolerance;
        }
      }
      if (new_group) groups.emplace_back();
      groups.back().push_back(order[pos]);
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::sort(groups[g].begin(), groups[g].end());
      for (int j : groups[g]) sys.group_of[k][j] = static_cast<int>(g);
    }
  }
  return sys;
}

template IncidenceSystem build_incidence<double>(const std::vector<double>&, int, int,
                                                 const double&);
template IncidenceSystem build_incidence<Rational>(const std::vector<Rational>&, int, int,
                                                   const Rational&);

}  // namespace ksn
