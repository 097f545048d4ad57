#include "ncwaring/matrix.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace ncw {

template <class T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<T>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

template <class T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
  return scalar(n, FieldTraits<T>::one());
}

template <class T>
Matrix<T> Matrix<T>::scalar(std::size_t n, const T& c) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = c;
  return m;
}

template <class T>
Matrix<T> Matrix<T>::diagonal(std::span<const T> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

template <class T>
Matrix<T> Matrix<T>::column(std::span<const T> v) {
  Matrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

template <class T>
Matrix<T> Matrix<T>::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  Matrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  }
  return b;
}

template <class T>
void Matrix<T>::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }
}

template <class T>
std::vector<T> Matrix<T>::diagonal_entries() const {
  std::vector<T> d;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) d.push_back((*this)(i, i));
  return d;
}

template <class T>
std::vector<T> Matrix<T>::column_vector(std::size_t j) const {
  std::vector<T> v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

template <class T>
Matrix<T>& Matrix<T>::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix sum");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

template <class T>
Matrix<T>& Matrix<T>::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix difference");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

template <class T>
Matrix<T>& Matrix<T>::operator*=(const T& c) {
  for (auto& x : data_) x *= c;
  return *this;
}

template <class T>
Matrix<T> Matrix<T>::multiply(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product");
  Matrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const T& aik = a(i, k);
      if (aik == FieldTraits<T>::zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

template <class T>
Matrix<T> Matrix<T>::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

template <class T>
double Matrix<T>::max_abs() const {
  double m = 0.0;
  for (const auto& x : data_) m = std::max(m, FieldTraits<T>::magnitude(x));
  return m;
}

namespace {

std::string entry_text(const Rational& q) { return to_string(q); }
std::string entry_text(const Complex& z) { return to_string(z); }

}  // namespace

template <class T>
std::string Matrix<T>::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << entry_text((*this)(i, j));
  }
  os << "]";
  return os.str();
}

template <class T>
T trace(const Matrix<T>& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "trace of a non-square matrix");
  T t = FieldTraits<T>::zero();
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

namespace {

// Row index of the pivot in column `col` at or below `start`, or npos.
template <class T>
std::size_t find_pivot(const Matrix<T>& a, std::size_t start, std::size_t col, double scale) {
  std::size_t best = static_cast<std::size_t>(-1);
  double best_mag = 0.0;
  for (std::size_t r = start; r < a.rows(); ++r) {
    if (FieldTraits<T>::is_zero(a(r, col), scale)) continue;
    if constexpr (FieldTraits<T>::exact) {
      return r;
    } else {
      const double mag = FieldTraits<T>::magnitude(a(r, col));
      if (mag > best_mag) {
        best_mag = mag;
        best = r;
      }
    }
  }
  return best;
}

template <class T>
void swap_rows(Matrix<T>& a, std::size_t r1, std::size_t r2) {
  if (r1 == r2) return;
  for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r1, j), a(r2, j));
}

// In-place reduced row echelon form; returns the pivot columns.
template <class T>
std::vector<std::size_t> rref(Matrix<T>& a) {
  const double scale = a.max_abs();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    const std::size_t p = find_pivot(a, row, col, scale);
    if (p == static_cast<std::size_t>(-1)) {
      if constexpr (!FieldTraits<T>::exact) {
        for (std::size_t r = row; r < a.rows(); ++r) a(r, col) = FieldTraits<T>::zero();
      }
      continue;
    }
    swap_rows(a, row, p);
    const T inv = FieldTraits<T>::one() / a(row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) *= inv;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, col) == FieldTraits<T>::zero()) continue;
      const T f = a(r, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(r, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

template <class T>
T det(const Matrix<T>& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return FieldTraits<T>::one();
  Matrix<T> a = m;
  if constexpr (FieldTraits<T>::exact) {
    // Bareiss: every division below is exact.
    T sign = FieldTraits<T>::one();
    T prev = FieldTraits<T>::one();
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (sgn(a(k, k)) == 0) {
        std::size_t p = k + 1;
        while (p < n && sgn(a(p, k)) == 0) ++p;
        if (p == n) return FieldTraits<T>::zero();
        swap_rows(a, k, p);
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j) {
          a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        }
      }
      prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
  } else {
    T d = FieldTraits<T>::one();
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      double best = FieldTraits<T>::magnitude(a(k, k));
      for (std::size_t r = k + 1; r < n; ++r) {
        const double mag = FieldTraits<T>::magnitude(a(r, k));
        if (mag > best) {
          best = mag;
          p = r;
        }
      }
      if (best == 0.0) return FieldTraits<T>::zero();
      if (p != k) {
        swap_rows(a, k, p);
        d = -d;
      }
      d *= a(k, k);
      for (std::size_t r = k + 1; r < n; ++r) {
        const T f = a(r, k) / a(k, k);
        for (std::size_t j = k; j < n; ++j) a(r, j) -= f * a(k, j);
      }
    }
    return d;
  }
}

template <class T>
Matrix<T> mat_solve(const Matrix<T>& a, const Matrix<T>& b) {
  if (!a.is_square() || a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "mat_solve shapes");
  const std::size_t n = a.rows();
  const std::size_t k = b.cols();
  Matrix<T> aug(n, n + k);
  aug.set_block(0, 0, a);
  aug.set_block(0, n, b);
  const double scale = a.max_abs();
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t p = find_pivot(aug, col, col, scale);
    if (p == static_cast<std::size_t>(-1)) throw Error(ErrorCode::SingularMatrix, "matrix is singular");
    swap_rows(aug, col, p);
    const T inv = FieldTraits<T>::one() / aug(col, col);
    for (std::size_t j = col; j < n + k; ++j) aug(col, j) *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || aug(r, col) == FieldTraits<T>::zero()) continue;
      const T f = aug(r, col);
      for (std::size_t j = col; j < n + k; ++j) aug(r, j) -= f * aug(col, j);
    }
  }
  return aug.block(0, n, n, k);
}

template <class T>
Matrix<T> inverse(const Matrix<T>& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "inverse of a non-square matrix");
  return mat_solve(m, Matrix<T>::identity(m.rows()));
}

template <class T>
std::size_t rank(const Matrix<T>& m) {
  Matrix<T> a = m;
  return rref(a).size();
}

template <class T>
Matrix<T> null_space(const Matrix<T>& m) {
  Matrix<T> a = m;
  const auto pivots = rref(a);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (!is_pivot[j]) free_cols.push_back(j);
  }
  Matrix<T> basis(m.cols(), free_cols.size());
  for (std::size_t f = 0; f < free_cols.size(); ++f) {
    basis(free_cols[f], f) = FieldTraits<T>::one();
    for (std::size_t r = 0; r < pivots.size(); ++r) basis(pivots[r], f) = -a(r, free_cols[f]);
  }
  return basis;
}

template <class T>
Matrix<T> column_basis(const Matrix<T>& m) {
  Matrix<T> a = m;
  const auto pivots = rref(a);
  Matrix<T> out(m.rows(), pivots.size());
  for (std::size_t k = 0; k < pivots.size(); ++k) {
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, k) = m(i, pivots[k]);
  }
  return out;
}

template <class T>
bool is_scalar_matrix(const Matrix<T>& m) {
  if (!m.is_square()) return false;
  const double scale = m.max_abs();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (i == j) {
        if (!nearly_equal(m(i, i), m(0, 0), scale)) return false;
      } else if (!FieldTraits<T>::is_zero(m(i, j), scale)) {
        return false;
      }
    }
  }
  return true;
}

template <class T>
bool is_upper_triangular(const Matrix<T>& m) {
  const double scale = m.max_abs();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < i && j < m.cols(); ++j) {
      if (!FieldTraits<T>::is_zero(m(i, j), scale)) return false;
    }
  }
  return true;
}

template <class T>
bool is_lower_triangular(const Matrix<T>& m) {
  return is_upper_triangular(m.transpose());
}

template <class T>
Matrix<T> direct_sum(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> out(a.rows() + b.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), a.cols(), b);
  return out;
}

template <class T>
MatrixTuple<T> direct_sum(const MatrixTuple<T>& a, const MatrixTuple<T>& b) {
  if (a.variables() != b.variables()) throw Error(ErrorCode::DimensionMismatch, "tuple direct sum");
  MatrixTuple<T> out;
  for (std::size_t k = 0; k < a.variables(); ++k) out.blocks.push_back(direct_sum(a[k], b[k]));
  return out;
}

template <class T>
MatrixTuple<T> conjugate(const MatrixTuple<T>& x, const Matrix<T>& p, const Matrix<T>& p_inv) {
  MatrixTuple<T> out;
  out.blocks.reserve(x.variables());
  for (const auto& b : x.blocks) out.blocks.push_back(p * b * p_inv);
  return out;
}

template <class T>
Matrix<T> matrix_power(const Matrix<T>& m, std::size_t e) {
  Matrix<T> out = Matrix<T>::identity(m.rows());
  Matrix<T> base = m;
  while (e > 0) {
    if (e & 1U) out = out * base;
    e >>= 1U;
    if (e) base = base * base;
  }
  return out;
}

Matrix<Complex> to_complex(const Matrix<Rational>& m) {
  Matrix<Complex> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = FieldTraits<Rational>::to_complex(m(i, j));
  }
  return out;
}

MatrixTuple<Complex> to_complex(const MatrixTuple<Rational>& x) {
  MatrixTuple<Complex> out;
  for (const auto& b : x.blocks) out.blocks.push_back(to_complex(b));
  return out;
}

template <class T>
double max_abs_diff(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      m = std::max(m, FieldTraits<T>::magnitude(a(i, j) - b(i, j)));
    }
  }
  return m;
}

template class Matrix<Rational>;
template class Matrix<Complex>;

#define NCW_INSTANTIATE(T)                                                                 \
  template T trace(const Matrix<T>&);                                                      \
  template T det(const Matrix<T>&);                                                        \
  template Matrix<T> inverse(const Matrix<T>&);                                            \
  template Matrix<T> mat_solve(const Matrix<T>&, const Matrix<T>&);                        \
  template std::size_t rank(const Matrix<T>&);                                             \
  template Matrix<T> null_space(const Matrix<T>&);                                         \
  template Matrix<T> column_basis(const Matrix<T>&);                                       \
  template bool is_scalar_matrix(const Matrix<T>&);                                        \
  template bool is_upper_triangular(const Matrix<T>&);                                     \
  template bool is_lower_triangular(const Matrix<T>&);                                     \
  template Matrix<T> direct_sum(const Matrix<T>&, const Matrix<T>&);                       \
  template MatrixTuple<T> direct_sum(const MatrixTuple<T>&, const MatrixTuple<T>&);        \
  template MatrixTuple<T> conjugate(const MatrixTuple<T>&, const Matrix<T>&, const Matrix<T>&); \
  template Matrix<T> matrix_power(const Matrix<T>&, std::size_t);                           \
  template double max_abs_diff(const Matrix<T>&, const Matrix<T>&);

NCW_INSTANTIATE(Rational)
NCW_INSTANTIATE(Complex)
#undef NCW_INSTANTIATE

}  // namespace ncw
