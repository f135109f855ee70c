#pragma once

// Exact arithmetic used throughout: arbitrary-precision integers and
// rationals (always kept in lowest terms), plus the few conversions the
// rest of the library needs.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace spiral {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Rational make_rational(std::int64_t p, std::int64_t q) {
  if (q == 0) throw std::invalid_argument("zero denominator");
  return Rational(BigInt(p), BigInt(q));
}

inline Rational reciprocal(const Rational& r) {
  if (r == 0) throw std::domain_error("reciprocal of zero");
  return Rational(denominator(r), numerator(r));
}

/// Smallest integer >= p/q for q > 0.
inline BigInt ceil_div(const BigInt& p, const BigInt& q) {
  BigInt quot = p / q;
  BigInt rem = p % q;
  if (rem != 0 && ((rem > 0) == (q > 0))) ++quot;
  return quot;
}

inline BigInt ceil(const Rational& r) { return ceil_div(numerator(r), denominator(r)); }

inline bool is_integral(const Rational& r) { return denominator(r) == 1; }

/// "p/q" in lowest terms, or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Accepts "p", "p/q", with an optional leading sign. Throws std::invalid_argument.
inline Rational parse_rational(std::string_view text) {
  auto is_int = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  auto to_int = [](std::string_view s) {
    if (s.front() == '+') s.remove_prefix(1);
    return BigInt(std::string(s));
  };
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  if (!is_int(num)) throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  if (slash == std::string_view::npos) return Rational(to_int(num));
  std::string_view den = text.substr(slash + 1);
  if (!is_int(den)) throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  BigInt d = to_int(den);
  if (d == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  return Rational(to_int(num), d);
}

/// Natural log of a positive big integer, accurate far beyond the double range.
inline double log(const BigInt& x) {
  if (x <= 0) return -std::numeric_limits<double>::infinity();
  std::size_t bits = boost::multiprecision::msb(x) + 1;
  if (bits <= 1000) return std::log(x.convert_to<double>());
  std::size_t shift = bits - 64;
  BigInt top = x >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

inline double log(const Rational& r) { return log(numerator(r)) - log(denominator(r)); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace spiral
