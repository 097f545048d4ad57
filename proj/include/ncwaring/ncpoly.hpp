#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncwaring/expr.hpp"

namespace ncw {

/// A word over {1..m}; the empty word is the constant monomial.
using Word = std::vector<std::size_t>;

/// Noncommutative polynomial as word -> coefficient, zero coefficients never stored.
class NcPolynomial {
 public:
  explicit NcPolynomial(std::size_t m = 1) : m_(m) {}

  static NcPolynomial constant(const Rational& c, std::size_t m);
  static NcPolynomial variable(std::size_t index, std::size_t m);

  std::size_t variables() const { return m_; }
  const std::map<Word, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Length of the longest word; -1 for the zero polynomial.
  int degree() const;
  Rational constant_term() const;
  Rational coefficient(const Word& w) const;

  void add_term(const Word& w, const Rational& c);

  NcPolynomial& operator+=(const NcPolynomial& o);
  NcPolynomial& operator*=(const Rational& c);
  friend NcPolynomial operator+(NcPolynomial a, const NcPolynomial& b) { return a += b; }
  friend NcPolynomial operator*(NcPolynomial a, const Rational& c) { return a *= c; }
  friend NcPolynomial operator*(const NcPolynomial& a, const NcPolynomial& b);
  friend bool operator==(const NcPolynomial& a, const NcPolynomial& b) { return a.terms_ == b.terms_; }

  /// Value at commuting scalars.
  Rational eval_scalar(std::span<const Rational> alpha) const;

  template <class T>
  Matrix<T> evaluate(const MatrixTuple<T>& x) const;

  std::string to_string() const;

 private:
  std::size_t m_;
  std::map<Word, Rational> terms_;
};

/// Expands an inversion-free expression. Inverses of nonzero constants are
/// allowed. Throws NotPolynomial.
NcPolynomial expr_to_poly(const RatExpr& e);

/// A rational scalar tuple with f(alpha) = 0, or nullopt. Zero constant term
/// gives the zero tuple; otherwise a grid over [-box, box]^m (small heights
/// first) and univariate rational root solving. nullopt is not a proof that
/// no root exists.
std::optional<std::vector<Rational>> scalar_root(const NcPolynomial& f, long box = 3);

}  // namespace ncw
