#pragma once

// Ground-field backends.
//
// The algebraically closed field of the theory is modelled two ways: exact
// rationals (every certificate is computed here) and double-precision complex
// numbers (eigenvector-dependent constructions). Algorithms are templates over
// the scalar type and query the backend through FieldTraits.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>

namespace ncw {

using Rational = mpq_class;
using Complex = std::complex<double>;

/// Relative tolerance used by the complex backend for zero tests.
inline constexpr double kDefaultTolerance = 1e-9;

template <class T>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static bool is_zero(const Rational& x, double /*scale*/ = 1.0) { return sgn(x) == 0; }
  static double magnitude(const Rational& x) { return std::abs(x.get_d()); }
  static Rational from_rational(const Rational& q) { return q; }
  static Complex to_complex(const Rational& x) { return {x.get_d(), 0.0}; }
};

template <>
struct FieldTraits<Complex> {
  static constexpr bool exact = false;
  static Complex zero() { return {0.0, 0.0}; }
  static Complex one() { return {1.0, 0.0}; }
  static bool is_zero(const Complex& x, double scale = 1.0) {
    return std::abs(x) <= kDefaultTolerance * std::max(1.0, scale);
  }
  static double magnitude(const Complex& x) { return std::abs(x); }
  static Complex from_rational(const Rational& q) { return {q.get_d(), 0.0}; }
  static Complex to_complex(const Complex& x) { return x; }
};

template <class T>
bool nearly_equal(const T& a, const T& b, double scale = 1.0) {
  return FieldTraits<T>::is_zero(a - b, scale);
}

/// Parses "p", "-p", "p/q" or a plain decimal "1.25" into an exact rational.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form (or "p" when the denominator is 1).
std::string to_string(const Rational& q);

/// Fixed-format rendering used by the human-readable reports.
std::string to_string(const Complex& z);

Rational rational_from_double(double x);

}  // namespace ncw
