#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "ncwaring/matrix.hpp"
#include "ncwaring/unipoly.hpp"

namespace ncw {

template <class T>
struct FactorPair {
  Matrix<T> first;
  Matrix<T> second;
};

/// M = first * second with spectrum(first) = beta and spectrum(second) = gamma
/// (with multiplicity), for nonscalar invertible M and det M = prod beta_i gamma_i.
///
/// Peels one pair per step: in a basis (v, M v - c v, ...) with c = beta_i gamma_j
/// the first column is (c, 1, 0, ...), the factors are block triangular with
/// corners beta_i and gamma_j, and the recursion continues on the Schur
/// complement. Intermediate nonscalarity failures retry with other pairs,
/// other vectors and finally random rational conjugations (budget 50).
/// Throws ScalarInput, DeterminantMismatch, SingularPrescription, ConstructionFailed.
template <class T>
FactorPair<T> sourour_factor(const Matrix<T>& m, std::span<const T> beta, std::span<const T> gamma,
                             std::uint64_t seed = 0);

struct DiagonalizableOptions {
  /// Both factors get rational spectra (so they diagonalize exactly over Q).
  /// Prescribed eigenvalues are then perfect squares, except the one fixed by
  /// det M, so that value sets like those of x^2 can reach them exactly.
  bool rational_spectra = false;
  std::uint64_t seed = 0;
};

/// M = d1 * d2 with both factors diagonalizable. mu1, mu2 are their minimal
/// polynomials; squarefreeness of each is the certificate.
struct DiagonalizableFactors {
  Matrix<Rational> d1;
  Matrix<Rational> d2;
  UniPoly<Rational> mu1;
  UniPoly<Rational> mu2;
};

DiagonalizableFactors two_diagonalizable_factor(const Matrix<Rational>& m, const DiagonalizableOptions& options = {});

/// True iff the minimal polynomial of m is squarefree (m diagonalizable over
/// the algebraic closure). Stores the minimal polynomial in `mu` when given.
bool certify_diagonalizable(const Matrix<Rational>& m, UniPoly<Rational>* mu = nullptr);

/// Exact eigendecomposition of a diagonalizable matrix with rational spectrum;
/// equal eigenvalues are grouped, in ascending order. Throws IrrationalSpectrum,
/// ConstructionFailed (not diagonalizable).
struct RationalEigenbasis {
  Matrix<Rational> vectors;
  std::vector<Rational> values;
};
RationalEigenbasis diagonalize_rational(const Matrix<Rational>& m);

struct SylvesterPair {
  std::size_t a = 0;
  std::size_t b = 0;
};

/// Nonnegative a, b with a p + b q = n (smallest b first). Throws NotRepresentable.
SylvesterPair sylvester_representation(std::size_t n, std::size_t p, std::size_t q);

}  // namespace ncw
