#pragma once

#include <span>
#include <vector>

#include "ncwaring/matrix.hpp"

namespace ncw {

/// A = q * reduced * q^-1.
template <class T>
struct Similarity {
  Matrix<T> q;
  Matrix<T> reduced;
};

/// Similar matrix with zero diagonal for a trace-zero input, by induction on
/// the trailing block. Throws NonzeroTrace.
template <class T>
Similarity<T> zero_diagonal_similarity(const Matrix<T>& m);

/// Similar matrix whose diagonal is `d` (sum d == trace a) for a nonscalar
/// `a`. Each step picks v with a v outside span(v) and switches to the basis
/// (v, a v - d_i v, ...), which puts d_i in the leading corner while keeping
/// the trailing block nonscalar. Throws ScalarInput, TraceMismatch.
template <class T>
Similarity<T> prescribed_diagonal_similarity(const Matrix<T>& a, std::span<const T> d);

/// upper = diag(lambda) + strict_upper(m0), lower = diag(lambda) - strict_lower(m0),
/// so m0 = upper - lower and both factors have spectrum lambda.
/// Throws NonzeroDiagonal, RepeatedLambda.
template <class T>
struct TriangularSplit {
  Matrix<T> upper;
  Matrix<T> lower;
};

template <class T>
TriangularSplit<T> triangular_split(const Matrix<T>& m0, std::span<const T> lambda);

/// M = vectors * diag(values) * vectors^-1.
template <class T>
struct Eigenbasis {
  Matrix<T> vectors;
  std::vector<T> values;
};

/// Eigendecomposition of a matrix with n distinct eigenvalues. Rational input
/// must have a rational spectrum (IrrationalSpectrum otherwise); triangular
/// input keeps its diagonal order. Throws RepeatedEigenvalue.
template <class T>
Eigenbasis<T> diagonalize_distinct(const Matrix<T>& m);

/// Eigenvectors of m for the given (distinct) eigenvalues, in that order.
template <class T>
Matrix<T> eigenvectors_for(const Matrix<T>& m, std::span<const T> values);

/// Scales every nonzero column so that its largest entry is 1.
template <class T>
void normalize_columns(Matrix<T>& v);

/// to = p * from * p^-1 for two matrices sharing one distinct spectrum.
template <class T>
struct Conjugator {
  Matrix<T> p;
  Matrix<T> p_inv;
};

template <class T>
Conjugator<T> similarity_between(const Matrix<T>& from, const Matrix<T>& to);

/// Smallest pairwise distance between the eigenvalues of m relative to its
/// norm, and the smallest eigenvalue magnitude relative to its norm. Float
/// heuristics for the complex pipeline (the rational pipeline certifies).
struct SpectrumSeparation {
  double min_gap = 0.0;
  double min_magnitude = 0.0;
};
SpectrumSeparation spectrum_separation(const Matrix<Complex>& m);

/// Complex eigenvalues (unordered).
std::vector<Complex> eigenvalues(const Matrix<Complex>& m);

}  // namespace ncw
