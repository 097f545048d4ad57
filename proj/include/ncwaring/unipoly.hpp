#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncwaring/scalar.hpp"

namespace ncw {

/// Univariate polynomial with coefficients in ascending degree. Trailing
/// zeros are stripped, so the zero polynomial has no coefficients and
/// degree() == -1.
template <class T>
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<T> ascending);
  UniPoly(std::initializer_list<T> ascending) : UniPoly(std::vector<T>(ascending)) {}

  static UniPoly constant(const T& c) { return UniPoly(std::vector<T>{c}); }
  static UniPoly monomial(std::size_t degree, const T& c = FieldTraits<T>::one());
  /// prod (t - r) over the given roots.
  static UniPoly from_roots(std::span<const T> roots);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<T>& coefficients() const { return coeffs_; }
  /// Coefficient of t^k (zero beyond the degree).
  T coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : FieldTraits<T>::zero(); }
  const T& leading() const { return coeffs_.back(); }

  T operator()(const T& x) const;

  UniPoly& operator+=(const UniPoly& other);
  UniPoly& operator-=(const UniPoly& other);
  UniPoly& operator*=(const T& c);

  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
  friend UniPoly operator*(UniPoly a, const T& c) { return a *= c; }
  friend UniPoly operator-(UniPoly a) { return a *= -FieldTraits<T>::one(); }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) { return multiply(a, b); }
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.coeffs_ == b.coeffs_; }

  /// Largest coefficient magnitude; the scale used by approximate zero tests.
  double norm() const;

  std::string to_string(char var = 't') const;

 private:
  static UniPoly multiply(const UniPoly& a, const UniPoly& b);
  void strip();

  std::vector<T> coeffs_;
};

template <class T>
struct PolyDivision {
  UniPoly<T> quotient;
  UniPoly<T> remainder;
};

template <class T>
PolyDivision<T> divide(const UniPoly<T>& f, const UniPoly<T>& g);

template <class T>
UniPoly<T> poly_derivative(const UniPoly<T>& f);

template <class T>
UniPoly<T> make_monic(const UniPoly<T>& f);

/// Monic gcd (zero when both inputs are zero).
template <class T>
UniPoly<T> poly_gcd(const UniPoly<T>& f, const UniPoly<T>& g);

template <class T>
UniPoly<T> poly_lcm(const UniPoly<T>& f, const UniPoly<T>& g);

/// Resultant in the Sylvester-determinant convention:
/// res(f, g) = lc(f)^deg g * lc(g)^deg f * prod (a_i - b_j).
template <class T>
T resultant(const UniPoly<T>& f, const UniPoly<T>& g);

/// disc(f) = (-1)^(n(n-1)/2) * lc(f)^-1 * res(f, f').
template <class T>
T discriminant(const UniPoly<T>& f);

/// gcd(f, f') is constant. Exact (a certificate) for the rational backend.
template <class T>
bool is_squarefree(const UniPoly<T>& f);

/// f / gcd(f, f'): the product of the distinct linear factors of f.
template <class T>
UniPoly<T> squarefree_part(const UniPoly<T>& f);

/// All deg f complex roots with multiplicity, by Aberth iteration followed by
/// Newton polishing. Throws RootsNotConverged when the residual contract
/// |f(root)| <= tol * ||f|| cannot be met within the iteration budget.
std::vector<Complex> poly_roots_approx(const UniPoly<Complex>& f, int max_iterations = 1000);
std::vector<Complex> poly_roots_approx(const UniPoly<Rational>& f, int max_iterations = 1000);

/// Rational roots with multiplicity (ascending), found exactly.
std::vector<Rational> rational_roots(const UniPoly<Rational>& f);

UniPoly<Complex> to_complex(const UniPoly<Rational>& f);

/// Newton interpolation through (x_i, y_i) with distinct x_i.
template <class T>
UniPoly<T> interpolate(std::span<const T> xs, std::span<const T> ys);

}  // namespace ncw
