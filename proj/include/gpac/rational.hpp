#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <string>

namespace gpac {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Wide-exponent float for error budgets whose terms leave double range.
using WideReal = boost::multiprecision::cpp_bin_float_50;

inline BigInt floor_of(const Rational& r) {
  BigInt n = boost::multiprecision::numerator(r);
  const BigInt& d = boost::multiprecision::denominator(r);
  BigInt q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

inline Rational frac_of(const Rational& r) { return r - Rational(floor_of(r)); }

/// Exact "numerator/denominator" form ("n" when the denominator is 1).
inline std::string to_fraction_string(const Rational& r) {
  const BigInt& d = boost::multiprecision::denominator(r);
  if (d == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + d.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline WideReal to_wide(const Rational& r) {
  return WideReal(boost::multiprecision::numerator(r)) /
         WideReal(boost::multiprecision::denominator(r));
}

/// Natural log of a positive rational that may exceed double range.
inline double log_of(const Rational& r) {
  return static_cast<double>(boost::multiprecision::log(to_wide(r)));
}

inline Rational pow_of(const Rational& base, unsigned exponent) {
  Rational result = 1;
  for (unsigned i = 0; i < exponent; ++i) result *= base;
  return result;
}

}  // namespace gpac
