#include "ncwaring/expr.hpp"

#include <cctype>
#include <functional>

namespace ncw {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_node(ExprKind kind, std::vector<NodePtr> children) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->children = std::move(children);
  return n;
}

NodePtr make_constant(const Rational& c) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Constant;
  n->constant = c;
  return n;
}

NodePtr make_variable(std::size_t i) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Variable;
  n->variable = i;
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, std::size_t m) : text_(text), m_(m) {}

  NodePtr parse_all() {
    NodePtr e = expr();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

  std::size_t max_index() const { return max_index_; }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::SyntaxError, "at position " + std::to_string(pos_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string digits() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  NodePtr expr() {
    NodePtr acc = term();
    while (true) {
      if (accept('+')) {
        acc = make_node(ExprKind::Sum, {acc, term()});
      } else if (accept('-')) {
        acc = make_node(ExprKind::Sum, {acc, make_node(ExprKind::Negate, {term()})});
      } else {
        return acc;
      }
    }
  }

  NodePtr term() {
    NodePtr acc = unary();
    while (accept('*')) acc = make_node(ExprKind::Product, {acc, unary()});
    return acc;
  }

  NodePtr unary() {
    if (accept('-')) return make_node(ExprKind::Negate, {unary()});
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (!accept('^')) return base;
    const bool negative = accept('-');
    skip_space();
    const std::string exponent = digits();
    if (exponent.empty()) fail("expected an integer exponent");
    if (negative) {
      if (exponent != "1") fail("only the exponent -1 is supported for inversion");
      return make_node(ExprKind::Inverse, {base});
    }
    const unsigned long k = std::stoul(exponent);
    if (k == 0) fail("exponent 0 is not allowed");
    NodePtr acc = base;
    for (unsigned long i = 1; i < k; ++i) acc = make_node(ExprKind::Product, {acc, base});
    return acc;
  }

  NodePtr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (c == 'x') {
      ++pos_;
      const std::size_t at = pos_;
      const std::string index = digits();
      if (index.empty()) fail("expected a variable index after 'x'");
      const std::size_t i = std::stoul(index);
      if (i == 0 || (m_ > 0 && i > m_)) {
        throw Error(ErrorCode::UnknownVariable, "x" + index + " at position " + std::to_string(at - 1) +
                                                    " is outside x1..x" + std::to_string(m_));
      }
      max_index_ = std::max(max_index_, i);
      return make_variable(i);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::string literal = digits();
      if (pos_ < text_.size() && text_[pos_] == '.') {
        ++pos_;
        literal += "." + digits();
      } else if (pos_ + 1 < text_.size() && text_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
        ++pos_;
        literal += "/" + digits();
      }
      try {
        return make_constant(parse_rational(literal));
      } catch (const Error&) {
        fail("malformed number '" + literal + "'");
      }
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t m_;
  std::size_t pos_ = 0;
  std::size_t max_index_ = 0;
};

int precedence(const ExprNode& n) {
  switch (n.kind) {
    case ExprKind::Sum: return 1;
    case ExprKind::Product: return 2;
    case ExprKind::Negate: return 3;
    case ExprKind::Inverse: return 4;
    case ExprKind::Variable: return 5;
    case ExprKind::Constant: return sgn(n.constant) < 0 ? 3 : 5;
  }
  return 5;
}

std::string print(const ExprNode& n, int parent) {
  std::string s;
  switch (n.kind) {
    case ExprKind::Constant: s = to_string(n.constant); break;
    case ExprKind::Variable: s = "x" + std::to_string(n.variable); break;
    case ExprKind::Sum:
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        const ExprNode& c = *n.children[i];
        if (i == 0) {
          s = print(c, 1);
        } else if (c.kind == ExprKind::Negate) {
          s += " - " + print(*c.children[0], 2);
        } else {
          s += " + " + print(c, 2);
        }
      }
      break;
    case ExprKind::Product:
      for (std::size_t i = 0; i < n.children.size(); ++i) s += (i ? "*" : "") + print(*n.children[i], i ? 3 : 2);
      break;
    case ExprKind::Negate: s = "-" + print(*n.children[0], 3); break;
    case ExprKind::Inverse: s = print(*n.children[0], 5) + "^-1"; break;
  }
  return precedence(n) < parent ? "(" + s + ")" : s;
}

template <class T>
Matrix<T> eval_node(const ExprNode& n, const MatrixTuple<T>& x, std::size_t dim) {
  switch (n.kind) {
    case ExprKind::Constant: return Matrix<T>::scalar(dim, FieldTraits<T>::from_rational(n.constant));
    case ExprKind::Variable: return x.blocks[n.variable - 1];
    case ExprKind::Sum: {
      Matrix<T> acc = eval_node(*n.children[0], x, dim);
      for (std::size_t i = 1; i < n.children.size(); ++i) acc += eval_node(*n.children[i], x, dim);
      return acc;
    }
    case ExprKind::Product: {
      Matrix<T> acc = eval_node(*n.children[0], x, dim);
      for (std::size_t i = 1; i < n.children.size(); ++i) acc = acc * eval_node(*n.children[i], x, dim);
      return acc;
    }
    case ExprKind::Negate: return -eval_node(*n.children[0], x, dim);
    case ExprKind::Inverse: {
      const Matrix<T> inner = eval_node(*n.children[0], x, dim);
      try {
        return inverse(inner);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::SingularMatrix) throw;
        throw Error(ErrorCode::DomainError, "singular argument of " + print(n, 0));
      }
    }
  }
  throw Error(ErrorCode::InvalidInput, "corrupt expression node");
}

}  // namespace

RatExpr::RatExpr(std::shared_ptr<const ExprNode> root, std::size_t m) : root_(std::move(root)), m_(m) {}

RatExpr RatExpr::constant(const Rational& c, std::size_t m) { return RatExpr(make_constant(c), m); }

RatExpr RatExpr::variable(std::size_t index, std::size_t m) {
  if (index == 0 || index > m) throw Error(ErrorCode::UnknownVariable, "variable index out of range");
  return RatExpr(make_variable(index), m);
}

bool RatExpr::has_inverse() const {
  std::function<bool(const ExprNode&)> walk = [&](const ExprNode& n) {
    if (n.kind == ExprKind::Inverse) return true;
    for (const auto& c : n.children) {
      if (walk(*c)) return true;
    }
    return false;
  };
  return walk(*root_);
}

std::string RatExpr::to_string() const { return print(*root_, 0); }

RatExpr RatExpr::inverse() const { return RatExpr(make_node(ExprKind::Inverse, {root_}), m_); }

RatExpr operator+(const RatExpr& a, const RatExpr& b) {
  return RatExpr(make_node(ExprKind::Sum, {a.root_, b.root_}), std::max(a.m_, b.m_));
}

RatExpr operator-(const RatExpr& a, const RatExpr& b) { return a + (-b); }

RatExpr operator*(const RatExpr& a, const RatExpr& b) {
  return RatExpr(make_node(ExprKind::Product, {a.root_, b.root_}), std::max(a.m_, b.m_));
}

RatExpr operator-(const RatExpr& a) { return RatExpr(make_node(ExprKind::Negate, {a.root_}), a.m_); }

RatExpr parse(std::string_view text, std::size_t m) {
  Parser p(text, m);
  NodePtr root = p.parse_all();
  return RatExpr(std::move(root), m > 0 ? m : std::max<std::size_t>(1, p.max_index()));
}

template <class T>
Matrix<T> eval_expr(const RatExpr& e, const MatrixTuple<T>& x) {
  if (x.variables() < e.variables()) {
    throw Error(ErrorCode::DimensionMismatch, "expression uses " + std::to_string(e.variables()) +
                                                  " variables but the tuple has " + std::to_string(x.variables()));
  }
  return eval_node(e.root(), x, x.dimension());
}

template Matrix<Rational> eval_expr(const RatExpr&, const MatrixTuple<Rational>&);
template Matrix<Complex> eval_expr(const RatExpr&, const MatrixTuple<Complex>&);

}  // namespace ncw
