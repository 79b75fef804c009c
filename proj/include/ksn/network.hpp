#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ksn/representer.hpp"
#include "ksn/transfer_stack.hpp"

namespace ksn {

template <ScalarField T>
struct Provenance {
  std::int64_t n_fitted = 0;
  std::string fit_timestamp;
  T residual{};
};

// The assembled three-layer network: y(x) = sum_k h_k(z_k(x)), with h_k
// realized as a lookup on w_k(x) = tau_k(z_k(x)).
template <ScalarField T>
struct KolmogorovNetwork {
  TransferStack<T> stack;
  std::vector<LookupTable<T>> tables;
  Provenance<T> provenance;

  // Throws DomainError outside the unit cube. key_tolerance > 0 enables
  // nearest-key lookups; the default is exact matching.
  T eval(std::span<const T> x, const T& key_tolerance = T(0)) const;

  void validate() const;
};

// Canonical file format: a JSON document with fixed field order, all real
// values as decimal strings (shortest round-trip) in float mode and "p" or
// "p/q" fraction strings in rational mode, two-space indentation and a
// trailing newline. Saving the same network twice yields identical bytes.
template <ScalarField T>
std::string serialize_network(const KolmogorovNetwork<T>& net);

template <ScalarField T>
void save_network(const KolmogorovNetwork<T>& net, const std::string& path);

using AnyNetwork = std::variant<KolmogorovNetwork<double>, KolmogorovNetwork<Rational>>;

// Throws FormatError with field diagnostics on malformed input, IoError on
// unreadable files. The numeric mode is taken from the file.
AnyNetwork load_network(const std::string& path);
AnyNetwork parse_network(const std::string& text);

extern template struct KolmogorovNetwork<double>;
extern template struct KolmogorovNetwork<Rational>;
extern template std::string serialize_network<double>(const KolmogorovNetwork<double>&);
extern template std::string serialize_network<Rational>(const KolmogorovNetwork<Rational>&);
extern template void save_network<double>(const KolmogorovNetwork<double>&,
                                          const std::string&);
extern template void save_network<Rational>(const KolmogorovNetwork<Rational>&,
                                            const std::string&);

}  // namespace ksn
