#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ncwaring/expr.hpp"
#include "ncwaring/witness.hpp"

namespace ncw {

enum class DecompositionKind { Difference, LinearTwo, LinearThree, Quotient, ProductTwo, ProductThree, ProductTwelve };

std::string to_string(DecompositionKind kind);
DecompositionKind parse_kind(std::string_view name);

/// coefficient * f_function(x), or f_function(x)^-1 in products when inverted.
template <class T>
struct Term {
  T coefficient = FieldTraits<T>::one();
  bool inverted = false;
  std::size_t function = 0;
  MatrixTuple<T> x;
};

/// Sum kinds replay as sum coefficient_i f(X_i); product kinds as the ordered
/// product of f(X_i)^(+-1) (coefficients are 1).
template <class T>
struct Decomposition {
  DecompositionKind kind = DecompositionKind::Difference;
  std::vector<Term<T>> terms;
  Matrix<Rational> target;
  double residual = 0.0;
  std::uint64_t seed = 0;
};

using AnyDecomposition = std::variant<Decomposition<Rational>, Decomposition<Complex>>;
using AnyTuple = std::variant<MatrixTuple<Rational>, MatrixTuple<Complex>>;

bool is_exact(const AnyDecomposition& d);
DecompositionKind kind_of(const AnyDecomposition& d);
double residual_of(const AnyDecomposition& d);
std::size_t term_count(const AnyDecomposition& d);
Decomposition<Complex> to_complex(const Decomposition<Rational>& d);

enum class Backend {
  Auto,   // exact whenever a witness with rational spectrum is found
  Exact,  // exact or fail
  Float   // eigenvector steps in complex floating point
};

struct WaringOptions {
  Backend backend = Backend::Auto;
  std::uint64_t seed = 0;
  std::size_t budget = 1000;
  long box = 5;
  double tolerance = 1e-8;
  double twelve_tolerance = 1e-6;
  std::size_t n0 = 2;
};

/// M = f(X1) - f(X2) for traceless M. Throws NonzeroTrace, WitnessNotFound.
AnyDecomposition decompose_difference(const RatExpr& f, const Matrix<Rational>& m, const WaringOptions& options = {});

/// M = alpha f(X1) + alpha f(X2) for nonscalar M with nonzero trace.
/// Throws ScalarTarget, ZeroTrace, TracelessImage.
AnyDecomposition decompose_linear_two(const RatExpr& f, const Matrix<Rational>& m, const WaringOptions& options = {});

/// M = beta f(X0) + f(X1) - f(X2) for any M. Throws TracelessImage, WitnessNotFound.
AnyDecomposition decompose_linear_three(const RatExpr& f, const Matrix<Rational>& m, const WaringOptions& options = {});

/// M = r(X1) r(X2)^-1 for det M = 1, M nonscalar or M = I.
/// Throws ScalarTarget for scalar M != I (checked first), DeterminantNotOne.
AnyDecomposition decompose_quotient(const RatExpr& r, const Matrix<Rational>& m, const WaringOptions& options = {});

struct DetTargetOptions {
  Backend backend = Backend::Auto;
  std::uint64_t seed = 0;
  std::size_t budget = 60;
  long box = 3;
  /// Also require f(X) to have n distinct eigenvalues.
  bool require_distinct = false;
  /// Only lines X0 + t E_kk with X0 upper triangular, whose values stay
  /// triangular with at most one irrational diagonal entry.
  bool triangular_only = false;
  /// Multiplies every sampled base point and direction; a scale near
  /// |s|^(1 / (n deg f)) keeps the values of f balanced for tiny or huge s.
  Rational scale = 1;
};

/// Power of two closest to |s|^(1 / (n deg)) (1 for deg <= 0 or s = 0).
Rational balancing_scale(const Rational& s, std::size_t n, int deg);

/// X with det f(X) = s, by solving det f(X0 + t X1) = s along lines. Along
/// each line the determinant is interpolated exactly from deg + 1 rational
/// points (deg <= n deg f) and checked at one more. Rational roots give exact
/// tuples; otherwise complex roots are used. Throws ConstantFunction,
/// DegenerateDirections.
AnyTuple solve_det_target(const RatExpr& f, std::size_t n, const Rational& s, const DetTargetOptions& options = {});

/// M = f(X1) g(X2) for invertible nonscalar M. Throws SingularTarget, ScalarTarget.
AnyDecomposition decompose_product_two(const RatExpr& f, const RatExpr& g, const Matrix<Rational>& m,
                                       const WaringOptions& options = {});

/// M = f(X1) g(X2) h(X3) for invertible M. Throws SingularTarget.
AnyDecomposition decompose_product_three(const RatExpr& f, const RatExpr& g, const RatExpr& h,
                                         const Matrix<Rational>& m, const WaringOptions& options = {});

/// M as a product of at most twelve values of a polynomial f with a scalar
/// root, for n >= 2 n0. Throws NoScalarRoot, ThresholdTooLarge, NotPolynomial.
AnyDecomposition decompose_product_twelve(const RatExpr& f, const Matrix<Rational>& m,
                                          const WaringOptions& options = {});

struct VerificationReport {
  double residual = 0.0;
  bool pass = false;
  std::string message;
};

/// Re-evaluates every term from scratch and compares the replay with the
/// target. The residual is max|replay - target| / max(1, max|target|); exact
/// decompositions pass only on exact equality.
template <class T>
VerificationReport verify(const Decomposition<T>& d, std::span<const RatExpr> functions, double tolerance);

VerificationReport verify(const AnyDecomposition& d, std::span<const RatExpr> functions, double tolerance);

/// Replayed matrix of a decomposition.
template <class T>
Matrix<T> replay(const Decomposition<T>& d, std::span<const RatExpr> functions);

}  // namespace ncw
