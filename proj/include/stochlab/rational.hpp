/**
 * @file rational.hpp
 * @brief Exact arbitrary-precision integers and rationals.
 *
 * Rational is the currency of every closed-form probability in the library:
 * identities are tested as exact equalities, never with tolerances.  Floating
 * point appears only where a quantity is genuinely transcendental (Stirling
 * evaluation, Monte Carlo statistics).
 *
 * Backed by boost::multiprecision; cpp_rational maintains the canonical form
 * (gcd-reduced, denominator > 0) after every operation.
 */

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "stochlab/errors.hpp"

namespace stochlab {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Serialized form is always "p/q" with q > 0 (the "/q" kept even when q = 1)
/// so values round-trip losslessly through JSON/CSV.
inline std::string format_rational(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Accepts "p/q" or a bare integer "p"; whitespace is not tolerated.
inline Rational parse_rational(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(Integer(text));
    const Integer num(text.substr(0, slash));
    const Integer den(text.substr(slash + 1));
    if (den == 0) raise("BadRational", "zero denominator in \"" + text + "\"");
    return Rational(num, den);
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception&) {
    raise("BadRational", "cannot parse \"" + text + "\" as p/q");
  }
}

/// b^e for integer e of either sign (b != 0 when e < 0).
inline Rational pow_rational(const Rational& base, long long e) {
  if (e < 0 && base == 0) raise("BadRational", "0 raised to a negative power");
  Rational acc(1), b = base;
  unsigned long long n = e < 0 ? static_cast<unsigned long long>(-e)
                               : static_cast<unsigned long long>(e);
  while (n != 0) {
    if (n & 1) acc *= b;
    b *= b;
    n >>= 1;
  }
  if (e < 0) acc = Rational(denominator(acc), numerator(acc));
  return acc;
}

inline Integer factorial(unsigned long n) {
  Integer acc(1);
  for (unsigned long i = 2; i <= n; ++i) acc *= i;
  return acc;
}

}  // namespace stochlab
