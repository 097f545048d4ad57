#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ncwaring/expr.hpp"

namespace ncw {

/// Linear representation r = c^t L^-1 b with L = A_0 + A_1 x_1 + ... + A_m x_m.
struct Realization {
  std::size_t m = 0;
  std::vector<Matrix<Rational>> pencil;  // A_0 .. A_m, each delta x delta
  std::vector<Rational> b;
  std::vector<Rational> c;

  std::size_t delta() const { return b.size(); }
};

/// Structural compilation:
///   alpha      : L = [1], b = [alpha], c = [1]
///   x_i        : L = [[1, -x_i], [0, 1]], b = e_2, c = e_1
///   x_i^-1     : L = [x_i], b = c = [1]
///   r1 + r2    : block diagonal
///   r1 * r2    : L = [[L1, -b1 c2^t], [0, L2]], b = (0, b2), c = (c1, 0)
///   -r         : c -> -c
///   r^-1       : L = [[L, b], [-c^t, 0]], b = c = e_last (size delta + 1)
Realization from_expr(const RatExpr& e);

/// Realization of (x0 r - r x0)^-1 in m + 1 variables, x0 placed first, with
/// pencil [[L, 0, b x0], [0, L, b], [-c^t, c^t x0, 0]] of size 2 delta + 1.
Realization commutator_inverse(const Realization& r);

/// L(X) = A_0 (x) I + sum A_k (x) X_k as a (delta n) x (delta n) block matrix.
template <class T>
Matrix<T> pencil_at(const Realization& r, const MatrixTuple<T>& x);

/// (c^t (x) I) L(X)^-1 (b (x) I). Throws PencilSingular.
template <class T>
Matrix<T> eval_realization(const Realization& r, const MatrixTuple<T>& x);

/// det L(X) != 0, a sufficient condition for X in the domain.
template <class T>
bool domain_check(const Realization& r, const MatrixTuple<T>& x);

struct Thresholds {
  std::size_t delta = 0;
  std::size_t n_domain_nonempty = 0;  // delta - 1
  std::size_t n_noncentral = 0;       // 2 delta
  std::size_t p = 0;                  // smallest primes > 2 delta, p < q
  std::size_t q = 0;
  std::size_t n_distinct = 0;         // (p - 1)(q - 1)
  long bertrand_bound = 0;            // 4 (delta - 2)(2 delta - 5)
  std::optional<std::size_t> poly_noncentral;  // ceil(d / 2) + 1 for polynomials of degree d
};

Thresholds thresholds(std::size_t delta, std::optional<int> degree = std::nullopt);

bool is_prime(std::size_t k);
std::size_t next_prime_after(std::size_t k);

}  // namespace ncw
