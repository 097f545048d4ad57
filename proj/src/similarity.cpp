#include "ncwaring/similarity.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <optional>

#include "ncwaring/charpoly.hpp"
#include "ncwaring/rng.hpp"

namespace ncw {

namespace {

template <class T>
Matrix<T> basis_vector(std::size_t n, std::size_t i) {
  Matrix<T> e(n, 1);
  e(i, 0) = FieldTraits<T>::one();
  return e;
}

template <class T>
Matrix<T> hstack(const std::vector<Matrix<T>>& cols) {
  Matrix<T> out(cols.front().rows(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) out.set_block(0, j, cols[j]);
  return out;
}

// Greedily extends `cols` to a basis with the given candidate vectors.
template <class T>
bool extend_to_basis(std::vector<Matrix<T>>& cols, const std::vector<Matrix<T>>& candidates) {
  const std::size_t n = cols.front().rows();
  for (const auto& c : candidates) {
    if (cols.size() == n) break;
    cols.push_back(c);
    if (rank(hstack(cols)) < cols.size()) cols.pop_back();
  }
  return cols.size() == n;
}

// Basis whose first vector v satisfies s v = x v + w2 (w2 the second basis
// vector), so the conjugated matrix has x in its corner. When `nonscalar_tail`
// the trailing block of the conjugated matrix must be nonscalar.
template <class T>
std::optional<Matrix<T>> corner_basis(const Matrix<T>& s, const T& x, bool nonscalar_tail) {
  const std::size_t k = s.rows();
  Rng rng(0x51a1ULL + k);
  std::vector<Matrix<T>> seeds;
  for (std::size_t i = 0; i < k; ++i) seeds.push_back(basis_vector<T>(k, i));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) seeds.push_back(basis_vector<T>(k, i) + basis_vector<T>(k, j));
  }
  auto random_vector = [&]() {
    Matrix<T> v(k, 1);
    for (std::size_t i = 0; i < k; ++i) v(i, 0) = T(rng.uniform_int(-3, 3));
    return v;
  };
  for (int extra = 0; extra < 64; ++extra) seeds.push_back(random_vector());

  std::vector<Matrix<T>> standard;
  for (std::size_t i = 0; i < k; ++i) standard.push_back(basis_vector<T>(k, i));

  for (const auto& v : seeds) {
    const Matrix<T> sv = s * v;
    if (rank(hstack<T>({v, sv})) < 2) continue;
    const Matrix<T> w2 = sv - v * x;
    for (int attempt = 0; attempt < 4; ++attempt) {
      std::vector<Matrix<T>> cols{v, w2};
      std::vector<Matrix<T>> fill = standard;
      if (attempt > 0) {
        fill.clear();
        for (std::size_t i = 0; i < 2 * k; ++i) fill.push_back(random_vector());
        fill.insert(fill.end(), standard.begin(), standard.end());
      }
      if (!extend_to_basis(cols, fill)) continue;
      Matrix<T> basis = hstack(cols);
      if (!nonscalar_tail) return basis;
      const Matrix<T> conj = inverse(basis) * s * basis;
      if (!is_scalar_matrix(conj.block(1, 1, k - 1, k - 1))) return basis;
    }
  }
  return std::nullopt;
}

template <class T>
Matrix<T> embed_trailing(std::size_t n, std::size_t offset, const Matrix<T>& t) {
  Matrix<T> g = Matrix<T>::identity(n);
  g.set_block(offset, offset, t);
  return g;
}

}  // namespace

template <class T>
Similarity<T> prescribed_diagonal_similarity(const Matrix<T>& a, std::span<const T> d) {
  if (!a.is_square() || d.size() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "prescribed diagonal length");
  const std::size_t n = a.rows();
  const double scale = a.max_abs();
  T sum = FieldTraits<T>::zero();
  for (const auto& x : d) sum += x;
  if (!nearly_equal(sum, trace(a), scale)) {
    throw Error(ErrorCode::TraceMismatch, "prescribed diagonal must sum to the trace");
  }
  bool already = true;
  for (std::size_t i = 0; i < n; ++i) already = already && nearly_equal(a(i, i), d[i], scale);
  if (already) return {Matrix<T>::identity(n), a};
  if (is_scalar_matrix(a)) throw Error(ErrorCode::ScalarInput, "a scalar matrix only has a constant diagonal");

  Matrix<T> c = a;
  Matrix<T> q = Matrix<T>::identity(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t k = n - i;
    const Matrix<T> s = c.block(i, i, k, k);
    if (nearly_equal(s(0, 0), d[i], scale) && (k == 2 || !is_scalar_matrix(s.block(1, 1, k - 1, k - 1)))) continue;
    auto basis = corner_basis(s, d[i], k >= 3);
    if (!basis) throw Error(ErrorCode::ConstructionFailed, "no basis places the prescribed diagonal entry");
    const Matrix<T> g = embed_trailing(n, i, *basis);
    const Matrix<T> g_inv = embed_trailing(n, i, inverse(*basis));
    c = g_inv * c * g;
    q = q * g;
  }
  return {std::move(q), std::move(c)};
}

template <class T>
Similarity<T> zero_diagonal_similarity(const Matrix<T>& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "zero_diagonal_similarity needs a square matrix");
  const double scale = m.max_abs();
  if (!FieldTraits<T>::is_zero(trace(m), scale)) throw Error(ErrorCode::NonzeroTrace, "input must be traceless");
  std::vector<T> zeros(m.rows(), FieldTraits<T>::zero());
  // A traceless scalar matrix is zero and already has zero diagonal.
  return prescribed_diagonal_similarity<T>(m, zeros);
}

template <class T>
TriangularSplit<T> triangular_split(const Matrix<T>& m0, std::span<const T> lambda) {
  const std::size_t n = m0.rows();
  if (!m0.is_square() || lambda.size() != n) throw Error(ErrorCode::DimensionMismatch, "triangular_split shapes");
  const double scale = m0.max_abs();
  for (std::size_t i = 0; i < n; ++i) {
    if (!FieldTraits<T>::is_zero(m0(i, i), scale)) throw Error(ErrorCode::NonzeroDiagonal, "diagonal must be zero");
    for (std::size_t j = 0; j < i; ++j) {
      if (nearly_equal(lambda[i], lambda[j])) throw Error(ErrorCode::RepeatedLambda, "lambda entries must be distinct");
    }
  }
  TriangularSplit<T> out{Matrix<T>::diagonal(lambda), Matrix<T>::diagonal(lambda)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j > i) out.upper(i, j) = m0(i, j);
      if (j < i) out.lower(i, j) = -m0(i, j);
    }
  }
  return out;
}

namespace {

// Eigenvector of an upper or lower triangular matrix for its k-th diagonal entry.
template <class T>
Matrix<T> triangular_eigenvector(const Matrix<T>& m, std::size_t k, bool upper) {
  const std::size_t n = m.rows();
  Matrix<T> v(n, 1);
  const T lambda = m(k, k);
  v(k, 0) = FieldTraits<T>::one();
  if (upper) {
    for (std::size_t j = k; j-- > 0;) {
      T acc = FieldTraits<T>::zero();
      for (std::size_t l = j + 1; l <= k; ++l) acc += m(j, l) * v(l, 0);
      v(j, 0) = acc / (lambda - m(j, j));
    }
  } else {
    for (std::size_t j = k + 1; j < n; ++j) {
      T acc = FieldTraits<T>::zero();
      for (std::size_t l = k; l < j; ++l) acc += m(j, l) * v(l, 0);
      v(j, 0) = acc / (lambda - m(j, j));
    }
  }
  return v;
}

using EigenMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

EigenMatrix to_eigen(const Matrix<Complex>& m) {
  EigenMatrix e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  }
  return e;
}

struct ComplexEigen {
  std::vector<Complex> values;
  Matrix<Complex> vectors;
};

ComplexEigen complex_eigen(const Matrix<Complex>& m) {
  Eigen::ComplexEigenSolver<EigenMatrix> solver(to_eigen(m), true);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::ConstructionFailed, "eigen decomposition failed");
  const std::size_t n = m.rows();
  ComplexEigen out{std::vector<Complex>(n), Matrix<Complex>(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = solver.eigenvalues()(static_cast<Eigen::Index>(j));
    for (std::size_t i = 0; i < n; ++i) {
      out.vectors(i, j) = solver.eigenvectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

template <class T>
void require_distinct(std::span<const T> values, double scale) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      bool same;
      if constexpr (FieldTraits<T>::exact) {
        same = values[i] == values[j];
      } else {
        same = std::abs(values[i] - values[j]) <= 1e-7 * std::max(1.0, scale);
      }
      if (same) throw Error(ErrorCode::RepeatedEigenvalue, "eigenvalues are not distinct");
    }
  }
}

}  // namespace

std::vector<Complex> eigenvalues(const Matrix<Complex>& m) {
  Eigen::ComplexEigenSolver<EigenMatrix> solver(to_eigen(m), false);
  std::vector<Complex> out;
  for (Eigen::Index j = 0; j < solver.eigenvalues().size(); ++j) out.push_back(solver.eigenvalues()(j));
  return out;
}

SpectrumSeparation spectrum_separation(const Matrix<Complex>& m) {
  const auto values = eigenvalues(m);
  const double scale = std::max(1.0, m.max_abs());
  SpectrumSeparation s{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < values.size(); ++i) {
    s.min_magnitude = std::min(s.min_magnitude, std::abs(values[i]) / scale);
    for (std::size_t j = 0; j < i; ++j) s.min_gap = std::min(s.min_gap, std::abs(values[i] - values[j]) / scale);
  }
  return s;
}

template <class T>
Matrix<T> eigenvectors_for(const Matrix<T>& m, std::span<const T> values) {
  const std::size_t n = m.rows();
  Matrix<T> v(n, values.size());
  const bool upper = is_upper_triangular(m);
  const bool lower = !upper && is_lower_triangular(m);
  if (upper || lower) {
    const auto diag = m.diagonal_entries();
    for (std::size_t c = 0; c < values.size(); ++c) {
      std::size_t best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < n; ++k) {
        const double dist = FieldTraits<T>::magnitude(diag[k] - values[c]);
        if (dist < best_dist) {
          best_dist = dist;
          best = k;
        }
      }
      v.set_block(0, c, triangular_eigenvector(m, best, upper));
    }
    normalize_columns(v);
    return v;
  }
  if constexpr (FieldTraits<T>::exact) {
    for (std::size_t c = 0; c < values.size(); ++c) {
      const Matrix<T> ns = null_space(m - Matrix<T>::scalar(n, values[c]));
      if (ns.cols() != 1) throw Error(ErrorCode::RepeatedEigenvalue, "eigenspace is not one-dimensional");
      v.set_block(0, c, ns);
    }
  } else {
    const ComplexEigen eig = complex_eigen(m);
    std::vector<bool> used(n, false);
    for (std::size_t c = 0; c < values.size(); ++c) {
      std::size_t best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < n; ++k) {
        const double dist = std::abs(eig.values[k] - values[c]);
        if (!used[k] && dist < best_dist) {
          best_dist = dist;
          best = k;
        }
      }
      used[best] = true;
      v.set_block(0, c, eig.vectors.block(0, best, n, 1));
    }
  }
  normalize_columns(v);
  return v;
}

template <class T>
void normalize_columns(Matrix<T>& v) {
  for (std::size_t c = 0; c < v.cols(); ++c) {
    std::size_t top = 0;
    for (std::size_t r = 1; r < v.rows(); ++r) {
      if (FieldTraits<T>::magnitude(v(r, c)) > FieldTraits<T>::magnitude(v(top, c))) top = r;
    }
    if (FieldTraits<T>::is_zero(v(top, c))) continue;
    const T inv = FieldTraits<T>::one() / v(top, c);
    for (std::size_t r = 0; r < v.rows(); ++r) v(r, c) *= inv;
  }
}

template <class T>
Eigenbasis<T> diagonalize_distinct(const Matrix<T>& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "diagonalize_distinct needs a square matrix");
  const std::size_t n = m.rows();
  const double scale = m.max_abs();
  Eigenbasis<T> out;
  if (is_upper_triangular(m) || is_lower_triangular(m)) {
    out.values = m.diagonal_entries();
  } else if constexpr (FieldTraits<T>::exact) {
    if (!is_squarefree(charpoly(m))) throw Error(ErrorCode::RepeatedEigenvalue, "characteristic polynomial has a repeated root");
    auto spectrum = exact_spectrum(m);
    if (!spectrum) throw Error(ErrorCode::IrrationalSpectrum, "spectrum is not rational");
    out.values = *spectrum;
  } else {
    ComplexEigen eig = complex_eigen(m);
    require_distinct<T>(eig.values, scale);
    out.values = std::move(eig.values);
    out.vectors = std::move(eig.vectors);
  }
  require_distinct<T>(out.values, scale);
  if (out.vectors.rows() != n) out.vectors = eigenvectors_for<T>(m, out.values);
  if constexpr (!FieldTraits<T>::exact) {
    const Matrix<T> lhs = m * out.vectors;
    const Matrix<T> rhs = out.vectors * Matrix<T>::diagonal(out.values);
    if (max_abs_diff(lhs, rhs) > 1e-8 * std::max(1.0, scale)) {
      throw Error(ErrorCode::ConstructionFailed, "eigenvector residual above tolerance");
    }
  }
  return out;
}

template <class T>
Conjugator<T> similarity_between(const Matrix<T>& from, const Matrix<T>& to) {
  const Eigenbasis<T> base = diagonalize_distinct(from);
  const Matrix<T> target_vectors = eigenvectors_for<T>(to, base.values);
  const Matrix<T> base_inv = inverse(base.vectors);
  return {target_vectors * base_inv, base.vectors * inverse(target_vectors)};
}

#define NCW_INSTANTIATE(T)                                                                   \
  template Similarity<T> zero_diagonal_similarity(const Matrix<T>&);                         \
  template Similarity<T> prescribed_diagonal_similarity(const Matrix<T>&, std::span<const T>); \
  template TriangularSplit<T> triangular_split(const Matrix<T>&, std::span<const T>);        \
  template Eigenbasis<T> diagonalize_distinct(const Matrix<T>&);                             \
  template Matrix<T> eigenvectors_for(const Matrix<T>&, std::span<const T>);                 \
  template Conjugator<T> similarity_between(const Matrix<T>&, const Matrix<T>&);            \
  template void normalize_columns(Matrix<T>&);

NCW_INSTANTIATE(Rational)
NCW_INSTANTIATE(Complex)
#undef NCW_INSTANTIATE

}  // namespace ncw
