#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ncwaring/matrix.hpp"
#include "ncwaring/unipoly.hpp"

namespace ncw {

/// det(tI - M), monic of degree n. Berkowitz's algorithm: division-free, so
/// the rational backend never leaves the ring generated by the entries.
template <class T>
UniPoly<T> charpoly(const Matrix<T>& m);

/// p(M) by Horner's rule.
template <class T>
Matrix<T> eval_poly_at(const UniPoly<T>& p, const Matrix<T>& m);

/// Minimal polynomial (monic). Built from Krylov sequences: start with a
/// seeded pseudo-random vector, and while the candidate does not annihilate M
/// take the lcm with the local minimal polynomial of the next basis vector.
UniPoly<Rational> minimal_polynomial(const Matrix<Rational>& m, std::uint64_t seed = 0);

/// Eigenvalues with multiplicity when the spectrum is rational: read off the
/// diagonal of triangular matrices, otherwise found as rational roots of the
/// characteristic polynomial. nullopt when some eigenvalue is irrational.
std::optional<std::vector<Rational>> exact_spectrum(const Matrix<Rational>& m);

}  // namespace ncw
