#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ncwaring/matrix.hpp"

namespace ncw {

enum class ExprKind { Constant, Variable, Sum, Product, Negate, Inverse };

struct ExprNode {
  ExprKind kind = ExprKind::Constant;
  Rational constant;
  std::size_t variable = 0;  // 1-based
  std::vector<std::shared_ptr<const ExprNode>> children;
};

/// Noncommutative rational expression in x1..xm. Immutable; copies share nodes.
class RatExpr {
 public:
  RatExpr(std::shared_ptr<const ExprNode> root, std::size_t m);

  static RatExpr constant(const Rational& c, std::size_t m);
  static RatExpr variable(std::size_t index, std::size_t m);

  const ExprNode& root() const { return *root_; }
  const std::shared_ptr<const ExprNode>& node() const { return root_; }
  std::size_t variables() const { return m_; }
  bool has_inverse() const;
  std::string to_string() const;

  RatExpr inverse() const;
  friend RatExpr operator+(const RatExpr& a, const RatExpr& b);
  friend RatExpr operator-(const RatExpr& a, const RatExpr& b);
  friend RatExpr operator*(const RatExpr& a, const RatExpr& b);
  friend RatExpr operator-(const RatExpr& a);

 private:
  std::shared_ptr<const ExprNode> root_;
  std::size_t m_;
};

/// Parses the expression grammar
///   expr   := term (('+' | '-') term)*
///   term   := unary ('*' unary)*
///   unary  := '-' unary | power
///   power  := atom ['^' ['-'] integer]
///   atom   := literal | 'x' index | '(' expr ')'
/// Literals are integers, decimals or p/q. `^k` expands to a k-fold product
/// and `^-1` is inversion; other exponents are rejected. Unary minus binds
/// looser than '^', so -x1^2 is -(x1^2).
/// With m == 0 the variable count is the largest index used (at least 1).
/// Throws SyntaxError (with position) and UnknownVariable.
RatExpr parse(std::string_view text, std::size_t m = 0);

/// Direct recursive evaluation. Throws DomainError when the argument of an
/// inverse is singular (the point is outside this representative's domain).
template <class T>
Matrix<T> eval_expr(const RatExpr& e, const MatrixTuple<T>& x);

}  // namespace ncw
