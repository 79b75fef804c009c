#pragma once

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

namespace ksn {

// Exact rational scalar. All arithmetic on it is exact; values are kept
// canonical (reduced, positive denominator) by gmpxx.
using Rational = mpq_class;

enum class NumericMode { Float64, ExactRational };

template <class T>
concept ScalarField = std::same_as<T, double> || std::same_as<T, Rational>;

template <ScalarField T>
constexpr NumericMode numeric_mode_v =
    std::same_as<T, double> ? NumericMode::Float64 : NumericMode::ExactRational;

template <ScalarField T>
constexpr bool is_exact_v = std::same_as<T, Rational>;

const char* numeric_mode_name(NumericMode mode);

// SplitMix64 output stream: finalizer applied to seed + (index+1)*gamma.
// This is the fixed mixing function used for hashed piecewise-linear slopes
// and for the `random` dataset generator.
inline std::uint64_t mix64(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t x = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// mix64 scaled into [0, 1).
inline double mix64_unit_double(std::uint64_t seed, std::uint64_t index) {
  return static_cast<double>(mix64(seed, index)) * 0x1p-64;
}
Rational mix64_unit_rational(std::uint64_t seed, std::uint64_t index);

// Shortest decimal string that round-trips to the same double ("0.25", "1e-30").
std::string format_shortest(double v);
// General format with a fixed number of significant digits (CLI output).
std::string format_sig(double v, int sig_digits);
// "p" for integers, "p/q" otherwise.
std::string format_number(const Rational& v);
inline std::string format_number(double v) { return format_shortest(v); }

// Parses decimal ("0.25", "-1e-3") and fraction ("7/2") literals.
// For Rational the decimal is converted exactly (0.25 -> 1/4).
// Throws FormatError on malformed input.
template <ScalarField T>
T parse_number(std::string_view text);
template <>
double parse_number<double>(std::string_view text);
template <>
Rational parse_number<Rational>(std::string_view text);

inline double abs_value(double v) { return v < 0 ? -v : v; }
inline Rational abs_value(const Rational& v) { return v < 0 ? Rational(-v) : v; }

}  // namespace ksn
