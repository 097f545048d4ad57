#include "ncwaring/charpoly.hpp"

#include <algorithm>

#include "ncwaring/rng.hpp"

namespace ncw {

template <class T>
UniPoly<T> charpoly(const Matrix<T>& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "charpoly of a non-square matrix");
  const std::size_t n = m.rows();
  const T zero = FieldTraits<T>::zero();
  // Coefficients highest degree first for the leading r x r block.
  std::vector<T> c{FieldTraits<T>::one()};
  for (std::size_t r = 0; r < n; ++r) {
    // Leading (r+1) x (r+1) block = [[A_r, S], [R, a]].
    std::vector<T> toeplitz(r + 2, zero);
    toeplitz[0] = FieldTraits<T>::one();
    toeplitz[1] = -m(r, r);
    std::vector<T> krylov(r);  // A_r^k S
    for (std::size_t i = 0; i < r; ++i) krylov[i] = m(i, r);
    for (std::size_t k = 0; k < r; ++k) {
      T dot = zero;
      for (std::size_t i = 0; i < r; ++i) dot += m(r, i) * krylov[i];
      toeplitz[k + 2] = -dot;
      if (k + 1 < r) {
        std::vector<T> next(r, zero);
        for (std::size_t i = 0; i < r; ++i) {
          for (std::size_t j = 0; j < r; ++j) next[i] += m(i, j) * krylov[j];
        }
        krylov = std::move(next);
      }
    }
    std::vector<T> next(r + 2, zero);
    for (std::size_t i = 0; i < r + 2; ++i) {
      for (std::size_t j = 0; j <= std::min(i, r); ++j) next[i] += toeplitz[i - j] * c[j];
    }
    c = std::move(next);
  }
  std::reverse(c.begin(), c.end());
  return UniPoly<T>(std::move(c));
}

template <class T>
Matrix<T> eval_poly_at(const UniPoly<T>& p, const Matrix<T>& m) {
  Matrix<T> acc(m.rows(), m.cols());
  const auto& a = p.coefficients();
  for (std::size_t k = a.size(); k-- > 0;) {
    acc = acc * m;
    for (std::size_t i = 0; i < m.rows(); ++i) acc(i, i) += a[k];
  }
  return acc;
}

namespace {

// Monic minimal polynomial of v with respect to M.
UniPoly<Rational> local_minimal_polynomial(const Matrix<Rational>& m, const Matrix<Rational>& v) {
  const std::size_t n = m.rows();
  std::vector<Matrix<Rational>> krylov{v};
  while (true) {
    const std::size_t k = krylov.size();
    Matrix<Rational> basis(n, k);
    for (std::size_t j = 0; j < k; ++j) basis.set_block(0, j, krylov[j]);
    Matrix<Rational> next = m * krylov.back();
    if (rank(basis) < k) break;
    Matrix<Rational> with_next(n, k + 1);
    with_next.set_block(0, 0, basis);
    with_next.set_block(0, k, next);
    if (rank(with_next) == k) {
      // next = sum c_j M^j v, so t^k - sum c_j t^j annihilates v.
      const Matrix<Rational> ns = null_space(with_next);
      std::vector<Rational> coeffs(k + 1);
      const Rational top = ns(k, 0);
      for (std::size_t j = 0; j <= k; ++j) coeffs[j] = ns(j, 0) / top;
      return UniPoly<Rational>(std::move(coeffs));
    }
    krylov.push_back(std::move(next));
  }
  return UniPoly<Rational>::constant(Rational(1));
}

}  // namespace

UniPoly<Rational> minimal_polynomial(const Matrix<Rational>& m, std::uint64_t seed) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "minimal polynomial of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return UniPoly<Rational>::constant(Rational(1));
  Rng rng(seed);
  Matrix<Rational> v(n, 1);
  for (std::size_t i = 0; i < n; ++i) v(i, 0) = Rational(rng.uniform_int(-9, 9));
  if (v == Matrix<Rational>(n, 1)) v(0, 0) = 1;
  UniPoly<Rational> mu = local_minimal_polynomial(m, v);
  std::size_t next_basis = 0;
  while (!(eval_poly_at(mu, m) == Matrix<Rational>(n, n))) {
    Matrix<Rational> e(n, 1);
    e(next_basis++, 0) = 1;
    mu = poly_lcm(mu, local_minimal_polynomial(m, e));
  }
  return mu;
}

std::optional<std::vector<Rational>> exact_spectrum(const Matrix<Rational>& m) {
  if (is_upper_triangular(m) || is_lower_triangular(m)) {
    auto d = m.diagonal_entries();
    std::sort(d.begin(), d.end());
    return d;
  }
  auto roots = rational_roots(charpoly(m));
  if (roots.size() != m.rows()) return std::nullopt;
  return roots;
}

template UniPoly<Rational> charpoly(const Matrix<Rational>&);
template UniPoly<Complex> charpoly(const Matrix<Complex>&);
template Matrix<Rational> eval_poly_at(const UniPoly<Rational>&, const Matrix<Rational>&);
template Matrix<Complex> eval_poly_at(const UniPoly<Complex>&, const Matrix<Complex>&);

}  // namespace ncw
