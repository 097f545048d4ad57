#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "ncwaring/error.hpp"
#include "ncwaring/scalar.hpp"

namespace ncw {

/// Dense row-major matrix over one scalar backend. Most of the library works
/// with square matrices; rectangular shapes appear for vectors, Sylvester
/// matrices and pencil blocks.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, FieldTraits<T>::zero()) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows);

  static Matrix identity(std::size_t n);
  static Matrix scalar(std::size_t n, const T& c);
  static Matrix diagonal(std::span<const T> d);
  static Matrix column(std::span<const T> v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return rows_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
  std::vector<T> diagonal_entries() const;
  std::vector<T> column_vector(std::size_t j) const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(const T& c);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator-(Matrix a) { return a *= -FieldTraits<T>::one(); }
  friend Matrix operator*(Matrix a, const T& c) { return a *= c; }
  friend Matrix operator*(const T& c, Matrix a) { return a *= c; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) { return multiply(a, b); }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  Matrix transpose() const;
  /// Largest entry magnitude.
  double max_abs() const;
  std::string to_string() const;

  const std::vector<T>& data() const { return data_; }

 private:
  static Matrix multiply(const Matrix& a, const Matrix& b);

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// An m-tuple of n x n matrices (the inputs of an m-variable function).
template <class T>
struct MatrixTuple {
  std::vector<Matrix<T>> blocks;

  std::size_t variables() const { return blocks.size(); }
  std::size_t dimension() const { return blocks.empty() ? 0 : blocks.front().rows(); }
  const Matrix<T>& operator[](std::size_t k) const { return blocks[k]; }
  friend bool operator==(const MatrixTuple& a, const MatrixTuple& b) { return a.blocks == b.blocks; }
};

template <class T>
T trace(const Matrix<T>& m);

/// Fraction-free (Bareiss) elimination in the rational backend; partially
/// pivoted elimination in the complex backend.
template <class T>
T det(const Matrix<T>& m);

/// Throws SingularMatrix.
template <class T>
Matrix<T> inverse(const Matrix<T>& m);

/// Solves A X = B. Throws SingularMatrix.
template <class T>
Matrix<T> mat_solve(const Matrix<T>& a, const Matrix<T>& b);

template <class T>
std::size_t rank(const Matrix<T>& m);

/// Columns form a basis of the right null space.
template <class T>
Matrix<T> null_space(const Matrix<T>& m);

/// Maximal independent subset of the columns, in order.
template <class T>
Matrix<T> column_basis(const Matrix<T>& m);

template <class T>
bool is_scalar_matrix(const Matrix<T>& m);

template <class T>
bool is_upper_triangular(const Matrix<T>& m);

template <class T>
bool is_lower_triangular(const Matrix<T>& m);

template <class T>
Matrix<T> direct_sum(const Matrix<T>& a, const Matrix<T>& b);

template <class T>
MatrixTuple<T> direct_sum(const MatrixTuple<T>& a, const MatrixTuple<T>& b);

/// P X_k P^-1 for every component.
template <class T>
MatrixTuple<T> conjugate(const MatrixTuple<T>& x, const Matrix<T>& p, const Matrix<T>& p_inv);

template <class T>
Matrix<T> matrix_power(const Matrix<T>& m, std::size_t e);

Matrix<Complex> to_complex(const Matrix<Rational>& m);
MatrixTuple<Complex> to_complex(const MatrixTuple<Rational>& x);

/// Largest entry of |a - b|.
template <class T>
double max_abs_diff(const Matrix<T>& a, const Matrix<T>& b);

}  // namespace ncw
