#include "ncwaring/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "ncwaring/charpoly.hpp"
#include "ncwaring/rng.hpp"
#include "ncwaring/similarity.hpp"

namespace ncw {

namespace {

template <class T>
Matrix<T> hstack(const std::vector<Matrix<T>>& cols, std::size_t rows) {
  Matrix<T> out(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) out.set_block(0, j, cols[j]);
  return out;
}

template <class T>
std::size_t column_rank(const std::vector<Matrix<T>>& cols, std::size_t rows) {
  return cols.empty() ? 0 : rank(hstack(cols, rows));
}

template <class T>
Matrix<T> unit(std::size_t n, std::size_t i) {
  Matrix<T> e(n, 1);
  e(i, 0) = FieldTraits<T>::one();
  return e;
}

template <class T>
std::vector<Matrix<T>> probe_vectors(std::size_t n, Rng& rng) {
  std::vector<Matrix<T>> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(unit<T>(n, i));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(unit<T>(n, i) + unit<T>(n, j));
  }
  for (int r = 0; r < 8; ++r) {
    Matrix<T> v(n, 1);
    for (std::size_t i = 0; i < n; ++i) v(i, 0) = T(rng.uniform_int(-4, 4));
    out.push_back(std::move(v));
  }
  return out;
}

double column_norm(const Matrix<Complex>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.rows(); ++i) s += std::norm(v(i, 0));
  return std::sqrt(s);
}

// Unit columns (v, w) followed by an orthonormal basis of their complement,
// taken greedily from the unit vectors with the largest residuals.
std::optional<Matrix<Complex>> complete_basis_float(const Matrix<Complex>& v, const Matrix<Complex>& w) {
  const std::size_t n = v.rows();
  const double nv = column_norm(v), nw = column_norm(w);
  if (nv == 0.0 || nw == 0.0) return std::nullopt;
  std::vector<Matrix<Complex>> cols{v * Complex(1.0 / nv), w * Complex(1.0 / nw)};
  std::vector<Matrix<Complex>> ortho;
  auto residual = [&](Matrix<Complex> x) {
    for (const auto& q : ortho) {
      Complex dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(q(i, 0)) * x(i, 0);
      x -= q * dot;
    }
    return x;
  };
  for (const auto& c : cols) {
    const Matrix<Complex> r = residual(c);
    const double nr = column_norm(r);
    if (nr <= 1e-8) return std::nullopt;
    ortho.push_back(r * Complex(1.0 / nr));
  }
  while (cols.size() < n) {
    Matrix<Complex> best;
    double best_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Matrix<Complex> r = residual(unit<Complex>(n, i));
      const double nr = column_norm(r);
      if (nr > best_norm) best = r, best_norm = nr;
    }
    best = best * Complex(1.0 / best_norm);
    ortho.push_back(best);
    cols.push_back(best);
  }
  return hstack(cols, n);
}

// Basis (v, w, e_i ...) or nullopt when v, w are dependent.
template <class T>
std::optional<Matrix<T>> complete_basis(const Matrix<T>& v, const Matrix<T>& w) {
  if constexpr (!FieldTraits<T>::exact) return complete_basis_float(v, w);
  const std::size_t n = v.rows();
  std::vector<Matrix<T>> cols{v, w};
  if (column_rank(cols, n) < 2) return std::nullopt;
  for (std::size_t i = 0; i < n && cols.size() < n; ++i) {
    cols.push_back(unit<T>(n, i));
    if (column_rank(cols, n) < cols.size()) cols.pop_back();
  }
  if (cols.size() < n) return std::nullopt;
  return hstack(cols, n);
}

template <class T>
std::vector<T> without(const std::vector<T>& xs, std::size_t k) {
  std::vector<T> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i != k) out.push_back(xs[i]);
  }
  return out;
}

// Among the first `keep` valid choices of (beta_i, gamma_j, v) the one with
// the smallest |N1| |N2| is returned; deeper levels take the first choice.
template <class T>
std::optional<FactorPair<T>> sourour_step(const Matrix<T>& a, const std::vector<T>& beta, const std::vector<T>& gamma,
                                          Rng& rng, std::size_t keep = 1) {
  const std::size_t n = a.rows();
  if (n == 1) return FactorPair<T>{Matrix<T>{{beta[0]}}, Matrix<T>{{gamma[0]}}};
  const auto probes = probe_vectors<T>(n, rng);
  std::optional<FactorPair<T>> best;
  double best_score = 0.0;
  std::size_t found = 0;
  for (std::size_t pi = 0; pi < n; ++pi) {
    for (std::size_t pj = 0; pj < n; ++pj) {
      const T c = beta[pi] * gamma[pj];
      for (const auto& v : probes) {
        const Matrix<T> av = a * v;
        auto basis = complete_basis<T>(v, av - v * c);
        if (!basis) continue;
        const Matrix<T> basis_inv = inverse(*basis);
        const Matrix<T> ap = basis_inv * a * *basis;
        const Matrix<T> r = ap.block(0, 1, 1, n - 1);
        const Matrix<T> s = ap.block(1, 0, n - 1, 1);
        const Matrix<T> schur = ap.block(1, 1, n - 1, n - 1) - s * r * (FieldTraits<T>::one() / c);
        if (n - 1 >= 2 && is_scalar_matrix(schur)) continue;
        auto sub = sourour_step(schur, without(beta, pi), without(gamma, pj), rng, !FieldTraits<T>::exact && keep > 6 ? 6 : 1);
        if (!sub) continue;
        Matrix<T> n1(n, n);
        Matrix<T> n2(n, n);
        n1(0, 0) = beta[pi];
        n2(0, 0) = gamma[pj];
        n1.set_block(1, 0, s * (FieldTraits<T>::one() / gamma[pj]));
        n2.set_block(0, 1, r * (FieldTraits<T>::one() / beta[pi]));
        n1.set_block(1, 1, sub->first);
        n2.set_block(1, 1, sub->second);
        FactorPair<T> pair{*basis * n1 * basis_inv, *basis * n2 * basis_inv};
        const double score = pair.first.max_abs() * pair.second.max_abs();
        if (!best || score < best_score) {
          best = std::move(pair);
          best_score = score;
        }
        if (++found >= keep) return best;
      }
    }
  }
  return best;
}

template <class T>
bool spectrum_matches(const Matrix<T>& m, std::span<const T> values) {
  if constexpr (FieldTraits<T>::exact) {
    return UniPoly<T>::from_roots(values) == charpoly(m);
  } else {
    // Characteristic polynomial coefficients cancel badly for large entries;
    // match computed eigenvalues to the prescribed ones instead.
    std::vector<Complex> ev = eigenvalues(m);
    const double tol = 1e-7 * std::max(1.0, m.max_abs());
    for (const Complex& v : values) {
      auto it = std::min_element(ev.begin(), ev.end(),
                                 [&](const Complex& a, const Complex& b) { return std::abs(a - v) < std::abs(b - v); });
      if (it == ev.end() || std::abs(*it - v) > tol) return false;
      ev.erase(it);
    }
    return true;
  }
}

}  // namespace

template <class T>
FactorPair<T> sourour_factor(const Matrix<T>& m, std::span<const T> beta, std::span<const T> gamma,
                             std::uint64_t seed) {
  const std::size_t n = m.rows();
  if (!m.is_square() || beta.size() != n || gamma.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "sourour_factor needs n prescribed values per factor");
  }
  T prod = FieldTraits<T>::one();
  for (std::size_t i = 0; i < n; ++i) {
    if (FieldTraits<T>::is_zero(beta[i]) || FieldTraits<T>::is_zero(gamma[i])) {
      throw Error(ErrorCode::SingularPrescription, "prescribed eigenvalues must be nonzero");
    }
    prod *= beta[i] * gamma[i];
  }
  const T d = det(m);
  // Float spectra come from root finding; 1e-8 matches the determinant-target acceptance.
  const bool det_ok = FieldTraits<T>::exact ? FieldTraits<T>::is_zero(d - prod)
                                            : FieldTraits<T>::magnitude(d - prod) <= 1e-8 * std::max(FieldTraits<T>::magnitude(d), 1.0);
  if (!det_ok) {
    throw Error(ErrorCode::DeterminantMismatch, "det M must equal the product of the prescribed eigenvalues");
  }
  if (n == 1) return {Matrix<T>{{beta[0]}}, Matrix<T>{{gamma[0]}}};
  if (is_scalar_matrix(m)) throw Error(ErrorCode::ScalarInput, "scalar matrices have no prescribed-spectrum factorization");

  const std::vector<T> b(beta.begin(), beta.end());
  const std::vector<T> g(gamma.begin(), gamma.end());
  Rng rng(seed);
  const double scale = std::max(1.0, m.max_abs());
  for (int attempt = 0; attempt < 50; ++attempt) {
    Matrix<T> conj = Matrix<T>::identity(n);
    if (attempt > 0) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) conj(i, j) = T(rng.uniform_int(-3, 3));
      }
      if (FieldTraits<T>::is_zero(det(conj))) continue;
    }
    const Matrix<T> conj_inv = inverse(conj);
    auto pair = sourour_step(conj_inv * m * conj, b, g, rng, 24);
    if (!pair) continue;
    FactorPair<T> out{conj * pair->first * conj_inv, conj * pair->second * conj_inv};
    const bool product_ok = FieldTraits<T>::exact ? out.first * out.second == m
                                                  : max_abs_diff(out.first * out.second, m) <= 1e-8 * scale;
    if (product_ok && spectrum_matches<T>(out.first, b) && spectrum_matches<T>(out.second, g)) return out;
  }
  throw Error(ErrorCode::ConstructionFailed, "prescribed-spectrum factorization failed after 50 attempts");
}

bool certify_diagonalizable(const Matrix<Rational>& m, UniPoly<Rational>* mu) {
  UniPoly<Rational> p = minimal_polynomial(m);
  const bool ok = p.degree() <= 1 || is_squarefree(p);
  if (mu) *mu = std::move(p);
  return ok;
}

RationalEigenbasis diagonalize_rational(const Matrix<Rational>& m) {
  const std::size_t n = m.rows();
  auto spectrum = exact_spectrum(m);
  if (!spectrum) throw Error(ErrorCode::IrrationalSpectrum, "spectrum is not rational");
  RationalEigenbasis out{Matrix<Rational>(n, n), {}};
  std::size_t col = 0;
  for (std::size_t i = 0; i < spectrum->size(); ++i) {
    if (i > 0 && (*spectrum)[i] == (*spectrum)[i - 1]) continue;
    const Rational lambda = (*spectrum)[i];
    const Matrix<Rational> ns = null_space(m - Matrix<Rational>::scalar(n, lambda));
    for (std::size_t j = 0; j < ns.cols(); ++j) {
      if (col == n) break;
      out.vectors.set_block(0, col++, ns.block(0, j, n, 1));
      out.values.push_back(lambda);
    }
  }
  if (col != n) throw Error(ErrorCode::ConstructionFailed, "matrix is not diagonalizable");
  normalize_columns(out.vectors);
  return out;
}

namespace {

struct JordanData {
  Matrix<Rational> basis;  // columns: chains, bottom vector first
  std::vector<std::size_t> sizes;
};

// Jordan chains of a nilpotent matrix; in `basis` it becomes a direct sum of
// upper shift blocks.
JordanData jordan_chains(const Matrix<Rational>& nil) {
  const std::size_t k = nil.rows();
  std::vector<Matrix<Rational>> kernels{Matrix<Rational>(k, 0)};
  Matrix<Rational> power = Matrix<Rational>::identity(k);
  while (!(power == Matrix<Rational>(k, k))) {
    power = power * nil;
    kernels.push_back(null_space(power));
  }
  const std::size_t depth = kernels.size() - 1;
  struct Chain {
    Matrix<Rational> top;
    std::size_t length;
  };
  std::vector<Chain> chains;
  for (std::size_t level = depth; level >= 1; --level) {
    std::vector<Matrix<Rational>> span;
    for (std::size_t j = 0; j < kernels[level - 1].cols(); ++j) span.push_back(kernels[level - 1].block(0, j, k, 1));
    for (const auto& c : chains) span.push_back(matrix_power(nil, c.length - level) * c.top);
    std::size_t current = column_rank(span, k);
    for (std::size_t j = 0; j < kernels[level].cols(); ++j) {
      span.push_back(kernels[level].block(0, j, k, 1));
      const std::size_t grown = column_rank(span, k);
      if (grown > current) {
        chains.push_back({span.back(), level});
        current = grown;
      } else {
        span.pop_back();
      }
    }
  }
  JordanData out{Matrix<Rational>(k, k), {}};
  std::size_t col = 0;
  for (const auto& c : chains) {
    for (std::size_t e = c.length; e-- > 0;) out.basis.set_block(0, col++, matrix_power(nil, e) * c.top);
    out.sizes.push_back(c.length);
  }
  return out;
}

// Shift block of size k written as T * E with E = diag(0, 1, ..., 1) and T the
// companion-type matrix [t | e1 | ... | e_{k-1}] whose characteristic
// polynomial is x^k - 1 or (x - 1)(x - 4)...(x - k^2).
FactorPair<Rational> shift_factors(std::size_t k, bool rational_spectra) {
  UniPoly<Rational> target;
  if (rational_spectra) {
    std::vector<Rational> roots;
    for (std::size_t i = 1; i <= k; ++i) roots.emplace_back(static_cast<long>(i * i));
    target = UniPoly<Rational>::from_roots(roots);
  } else {
    target = UniPoly<Rational>::monomial(k) - UniPoly<Rational>::constant(Rational(1));
  }
  Matrix<Rational> t(k, k);
  Matrix<Rational> e = Matrix<Rational>::identity(k);
  e(0, 0) = 0;
  for (std::size_t i = 0; i < k; ++i) t(i, 0) = -target.coeff(k - 1 - i);
  for (std::size_t i = 1; i < k; ++i) t(i - 1, i) = 1;
  return {t, e};
}

bool acceptable_factor(const Matrix<Rational>& x, bool rational_spectra) {
  if (!certify_diagonalizable(x)) return false;
  return !rational_spectra || exact_spectrum(x).has_value();
}

// cond(V) of the normalized rational eigenbasis, in floating point.
double eigenbasis_condition(const Matrix<Rational>& x) {
  const RationalEigenbasis eb = diagonalize_rational(x);
  return to_complex(eb.vectors).max_abs() * to_complex(inverse(eb.vectors)).max_abs();
}

// Several prescriptions (shifted and rescaled spectra, fresh seeds) are tried
// and the pair with the best conditioned eigenbases is kept.
FactorPair<Rational> invertible_part(const Matrix<Rational>& b, const DiagonalizableOptions& options) {
  const std::size_t r = b.rows();
  if (acceptable_factor(b, options.rational_spectra)) return {b, Matrix<Rational>::identity(r)};
  const Rational d = det(b);
  // Power of four near |d|^(1 / 2r) / r^2.
  Rational balance = 1;
  {
    const double target = std::log2(std::abs(d.get_d())) / (2.0 * static_cast<double>(r)) - 2.0 * std::log2(static_cast<double>(r));
    const long e = std::lround(target / 2.0);
    for (long i = 0; i < std::abs(e); ++i) balance *= 4;
    if (e < 0) balance = 1 / balance;
  }
  std::optional<FactorPair<Rational>> best;
  double best_score = 0.0;
  std::string last_error;
  for (long attempt = 0; attempt < 8; ++attempt) {
    if (!options.rational_spectra && attempt % 2 == 1) continue;
    const Rational scale = attempt % 2 == 0 ? Rational(1) : balance;
    const long shift = attempt / 2;
    std::vector<Rational> beta;
    std::vector<Rational> gamma;
    Rational prod = 1;
    for (std::size_t i = 1; i <= r; ++i) {
      const long v = static_cast<long>(i) + shift;
      beta.push_back(options.rational_spectra ? scale * Rational(v * v) : Rational(v));
      prod *= beta.back();
    }
    for (std::size_t j = 1; j < r; ++j) {
      const long v = static_cast<long>(j);
      gamma.push_back(options.rational_spectra ? scale * Rational(v * v) : Rational(v));
      prod *= gamma.back();
    }
    const Rational last = d / prod;
    if (std::find(gamma.begin(), gamma.end(), last) != gamma.end()) continue;
    gamma.push_back(last);
    try {
      FactorPair<Rational> pair = sourour_factor<Rational>(b, beta, gamma, options.seed + static_cast<std::uint64_t>(attempt));
      const double score = eigenbasis_condition(pair.first) * eigenbasis_condition(pair.second);
      if (!best || score < best_score) {
        best = std::move(pair);
        best_score = score;
      }
    } catch (const Error& err) {
      if (err.code() != ErrorCode::ConstructionFailed) throw;
      last_error = err.what();
    }
  }
  if (!best) throw Error(ErrorCode::ConstructionFailed, "no prescription factored: " + last_error);
  return *best;
}

}  // namespace

DiagonalizableFactors two_diagonalizable_factor(const Matrix<Rational>& m, const DiagonalizableOptions& options) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "two_diagonalizable_factor needs a square matrix");
  const std::size_t n = m.rows();
  DiagonalizableFactors out;
  if (acceptable_factor(m, options.rational_spectra)) {
    out.d1 = m;
    out.d2 = Matrix<Rational>::identity(n);
  } else {
    // Fitting decomposition: M = R (B + N) R^-1 with B invertible, N nilpotent.
    const Matrix<Rational> power = matrix_power(m, n);
    const Matrix<Rational> image = column_basis(power);
    const Matrix<Rational> kernel = null_space(power);
    const std::size_t r = image.cols();
    Matrix<Rational> basis(n, n);
    if (r > 0) basis.set_block(0, 0, image);
    if (r < n) basis.set_block(0, r, kernel);
    const Matrix<Rational> basis_inv = inverse(basis);
    const Matrix<Rational> local = basis_inv * m * basis;
    Matrix<Rational> f1(n, n);
    Matrix<Rational> f2(n, n);
    if (r > 0) {
      const FactorPair<Rational> inv = invertible_part(local.block(0, 0, r, r), options);
      f1.set_block(0, 0, inv.first);
      f2.set_block(0, 0, inv.second);
    }
    if (r < n) {
      const JordanData jd = jordan_chains(local.block(r, r, n - r, n - r));
      Matrix<Rational> t(n - r, n - r);
      Matrix<Rational> e(n - r, n - r);
      std::size_t offset = 0;
      for (std::size_t size : jd.sizes) {
        const FactorPair<Rational> blocks = shift_factors(size, options.rational_spectra);
        t.set_block(offset, offset, blocks.first);
        e.set_block(offset, offset, blocks.second);
        offset += size;
      }
      const Matrix<Rational> j_inv = inverse(jd.basis);
      f1.set_block(r, r, jd.basis * t * j_inv);
      f2.set_block(r, r, jd.basis * e * j_inv);
    }
    out.d1 = basis * f1 * basis_inv;
    out.d2 = basis * f2 * basis_inv;
  }
  const bool ok1 = certify_diagonalizable(out.d1, &out.mu1);
  const bool ok2 = certify_diagonalizable(out.d2, &out.mu2);
  if (!ok1 || !ok2 || !(out.d1 * out.d2 == m)) {
    throw Error(ErrorCode::ConstructionFailed, "diagonalizable factors failed certification");
  }
  if (options.rational_spectra && !(exact_spectrum(out.d1) && exact_spectrum(out.d2))) {
    throw Error(ErrorCode::ConstructionFailed, "diagonalizable factors do not have rational spectra");
  }
  return out;
}

SylvesterPair sylvester_representation(std::size_t n, std::size_t p, std::size_t q) {
  if (p == 0 || q == 0) throw Error(ErrorCode::InvalidInput, "block sizes must be positive");
  for (std::size_t b = 0; b * q <= n; ++b) {
    if ((n - b * q) % p == 0) return {(n - b * q) / p, b};
  }
  throw Error(ErrorCode::NotRepresentable,
              std::to_string(n) + " is not a nonnegative combination of " + std::to_string(p) + " and " + std::to_string(q));
}

template FactorPair<Rational> sourour_factor(const Matrix<Rational>&, std::span<const Rational>,
                                             std::span<const Rational>, std::uint64_t);
template FactorPair<Complex> sourour_factor(const Matrix<Complex>&, std::span<const Complex>,
                                            std::span<const Complex>, std::uint64_t);

}  // namespace ncw
