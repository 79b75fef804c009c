#include "ksn/numeric.hpp"

#include <charconv>
#include <cstdlib>

#include "ksn/errors.hpp"

namespace ksn {

const char* numeric_mode_name(NumericMode mode) {
  return mode == NumericMode::Float64 ? "float64" : "exact_rational";
}

Rational mix64_unit_rational(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t h = mix64(seed, index);
  mpz_class hz;
  mpz_set_ui(hz.get_mpz_t(), static_cast<unsigned long>(h >> 32));
  mpz_mul_2exp(hz.get_mpz_t(), hz.get_mpz_t(), 32);
  mpz_add_ui(hz.get_mpz_t(), hz.get_mpz_t(), static_cast<unsigned long>(h & 0xFFFFFFFFULL));
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, 64);
  Rational q(hz, den);
  q.canonicalize();
  return q;
}

std::string format_shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_sig(double v, int sig_digits) {
  if (sig_digits < 1) sig_digits = 1;
  if (sig_digits > 40) sig_digits = 40;
  char buf[80];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, sig_digits);
  return std::string(buf, res.ptr);
}

std::string format_number(const Rational& v) {
  return v.get_str();  // "p" or "p/q", canonical
}

template <>
double parse_number<double>(std::string_view text) {
  if (text.empty()) throw FormatError("empty numeric literal");
  // Fraction literals are accepted in float mode too.
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational q = parse_number<Rational>(text);
    return q.get_d();
  }
  double value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto res = std::from_chars(first, last, value, std::chars_format::general);
  if (res.ec != std::errc() || res.ptr != last)
    throw FormatError("malformed number: '" + std::string(text) + "'");
  return value;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

template <>
Rational parse_number<Rational>(std::string_view text) {
  if (text.empty()) throw FormatError("empty numeric literal");
  std::string_view s = text;
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw FormatError("malformed number: '" + std::string(text) + "'");

  auto fail = [&]() -> Rational {
    throw FormatError("malformed number: '" + std::string(text) + "'");
  };

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return fail();
    mpz_class n(std::string(num), 10), d(std::string(den), 10);
    if (d == 0) throw FormatError("zero denominator: '" + std::string(text) + "'");
    Rational q(n, d);
    q.canonicalize();
    if (negative) q = -q;
    return q;
  }

  // decimal with optional fractional part and exponent
  std::string digits;
  long frac_len = 0;
  long exponent = 0;
  std::size_t i = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') digits.push_back(s[i++]);
  bool any_int = !digits.empty();
  bool any_frac = false;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
      digits.push_back(s[i++]);
      ++frac_len;
      any_frac = true;
    }
  }
  if (!any_int && !any_frac) return fail();
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      eneg = s[i] == '-';
      ++i;
    }
    if (i >= s.size()) return fail();
    long ev = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
      ev = ev * 10 + (s[i] - '0');
      if (ev > 1000000) throw FormatError("exponent out of range: '" + std::string(text) + "'");
      ++i;
    }
    exponent = eneg ? -ev : ev;
  }
  if (i != s.size()) return fail();

  mpz_class mantissa = digits.empty() ? mpz_class(0) : mpz_class(digits, 10);
  long pow10 = exponent - frac_len;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(pow10 < 0 ? -pow10 : pow10));
  Rational q;
  if (pow10 >= 0) {
    q = Rational(mantissa * scale);
  } else {
    q = Rational(mantissa, scale);
  }
  q.canonicalize();
  if (negative) q = -q;
  return q;
}

}  // namespace ksn
