#include "ncwaring/realization.hpp"

namespace ncw {

namespace {

Realization make_empty(std::size_t m, std::size_t delta) {
  Realization r;
  r.m = m;
  r.pencil.assign(m + 1, Matrix<Rational>(delta, delta));
  r.b.assign(delta, Rational(0));
  r.c.assign(delta, Rational(0));
  return r;
}

Realization scalar_realization(const Rational& alpha, std::size_t m) {
  Realization r = make_empty(m, 1);
  r.pencil[0](0, 0) = 1;
  r.b[0] = alpha;
  r.c[0] = 1;
  return r;
}

Realization variable_realization(std::size_t i, std::size_t m) {
  Realization r = make_empty(m, 2);
  r.pencil[0](0, 0) = 1;
  r.pencil[0](1, 1) = 1;
  r.pencil[i](0, 1) = -1;
  r.b[1] = 1;
  r.c[0] = 1;
  return r;
}

// Places `src` with its top-left corner at (offset, offset) of every pencil block.
void embed(Realization& dst, const Realization& src, std::size_t offset) {
  for (std::size_t k = 0; k <= dst.m; ++k) dst.pencil[k].set_block(offset, offset, src.pencil[k]);
}

Realization sum(const Realization& r1, const Realization& r2) {
  const std::size_t d1 = r1.delta();
  Realization r = make_empty(r1.m, d1 + r2.delta());
  embed(r, r1, 0);
  embed(r, r2, d1);
  for (std::size_t i = 0; i < d1; ++i) {
    r.b[i] = r1.b[i];
    r.c[i] = r1.c[i];
  }
  for (std::size_t i = 0; i < r2.delta(); ++i) {
    r.b[d1 + i] = r2.b[i];
    r.c[d1 + i] = r2.c[i];
  }
  return r;
}

Realization product(const Realization& r1, const Realization& r2) {
  const std::size_t d1 = r1.delta();
  Realization r = make_empty(r1.m, d1 + r2.delta());
  embed(r, r1, 0);
  embed(r, r2, d1);
  for (std::size_t i = 0; i < d1; ++i) {
    for (std::size_t j = 0; j < r2.delta(); ++j) r.pencil[0](i, d1 + j) = -r1.b[i] * r2.c[j];
  }
  for (std::size_t i = 0; i < d1; ++i) r.c[i] = r1.c[i];
  for (std::size_t j = 0; j < r2.delta(); ++j) r.b[d1 + j] = r2.b[j];
  return r;
}

Realization negate(Realization r) {
  for (auto& x : r.c) x = -x;
  return r;
}

Realization invert(const Realization& r1) {
  const std::size_t d = r1.delta();
  Realization r = make_empty(r1.m, d + 1);
  embed(r, r1, 0);
  for (std::size_t i = 0; i < d; ++i) {
    r.pencil[0](i, d) = r1.b[i];
    r.pencil[0](d, i) = -r1.c[i];
  }
  r.b[d] = 1;
  r.c[d] = 1;
  return r;
}

Realization compile(const ExprNode& n, std::size_t m) {
  switch (n.kind) {
    case ExprKind::Constant: return scalar_realization(n.constant, m);
    case ExprKind::Variable: return variable_realization(n.variable, m);
    case ExprKind::Sum: {
      Realization acc = compile(*n.children[0], m);
      for (std::size_t i = 1; i < n.children.size(); ++i) acc = sum(acc, compile(*n.children[i], m));
      return acc;
    }
    case ExprKind::Product: {
      Realization acc = compile(*n.children[0], m);
      for (std::size_t i = 1; i < n.children.size(); ++i) acc = product(acc, compile(*n.children[i], m));
      return acc;
    }
    case ExprKind::Negate: return negate(compile(*n.children[0], m));
    case ExprKind::Inverse: {
      const ExprNode& inner = *n.children[0];
      if (inner.kind == ExprKind::Variable) {
        Realization r = make_empty(m, 1);
        r.pencil[inner.variable](0, 0) = 1;
        r.b[0] = 1;
        r.c[0] = 1;
        return r;
      }
      if (inner.kind == ExprKind::Constant && sgn(inner.constant) != 0) {
        return scalar_realization(1 / inner.constant, m);
      }
      return invert(compile(inner, m));
    }
  }
  throw Error(ErrorCode::InvalidInput, "corrupt expression node");
}

}  // namespace

Realization from_expr(const RatExpr& e) { return compile(e.root(), e.variables()); }

Realization commutator_inverse(const Realization& r) {
  const std::size_t d = r.delta();
  Realization out = make_empty(r.m + 1, 2 * d + 1);
  for (std::size_t k = 0; k <= r.m; ++k) {
    const std::size_t target = k == 0 ? 0 : k + 1;
    out.pencil[target].set_block(0, 0, r.pencil[k]);
    out.pencil[target].set_block(d, d, r.pencil[k]);
  }
  for (std::size_t i = 0; i < d; ++i) {
    out.pencil[1](i, 2 * d) = r.b[i];       // b x0
    out.pencil[0](d + i, 2 * d) = r.b[i];   // b
    out.pencil[0](2 * d, i) = -r.c[i];      // -c^t
    out.pencil[1](2 * d, d + i) = r.c[i];   // c^t x0
  }
  // The bottom-right entry of the inverse pencil is (r x0 - x0 r)^-1.
  out.b[2 * d] = 1;
  out.c[2 * d] = -1;
  return out;
}

template <class T>
Matrix<T> pencil_at(const Realization& r, const MatrixTuple<T>& x) {
  if (x.variables() < r.m) throw Error(ErrorCode::DimensionMismatch, "tuple has fewer components than the realization");
  const std::size_t n = x.dimension();
  const std::size_t d = r.delta();
  Matrix<T> big(d * n, d * n);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      Matrix<T> block = Matrix<T>::scalar(n, FieldTraits<T>::from_rational(r.pencil[0](i, j)));
      for (std::size_t k = 1; k <= r.m; ++k) {
        const Rational& a = r.pencil[k](i, j);
        if (sgn(a) != 0) block += x.blocks[k - 1] * FieldTraits<T>::from_rational(a);
      }
      big.set_block(i * n, j * n, block);
    }
  }
  return big;
}

template <class T>
Matrix<T> eval_realization(const Realization& r, const MatrixTuple<T>& x) {
  const std::size_t n = x.dimension();
  const std::size_t d = r.delta();
  Matrix<T> rhs(d * n, n);
  for (std::size_t i = 0; i < d; ++i) {
    if (sgn(r.b[i]) == 0) continue;
    rhs.set_block(i * n, 0, Matrix<T>::scalar(n, FieldTraits<T>::from_rational(r.b[i])));
  }
  Matrix<T> y;
  try {
    y = mat_solve(pencil_at(r, x), rhs);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::SingularMatrix) throw;
    throw Error(ErrorCode::PencilSingular, "L(X) is singular");
  }
  Matrix<T> out(n, n);
  for (std::size_t i = 0; i < d; ++i) {
    if (sgn(r.c[i]) == 0) continue;
    out += y.block(i * n, 0, n, n) * FieldTraits<T>::from_rational(r.c[i]);
  }
  return out;
}

template <class T>
bool domain_check(const Realization& r, const MatrixTuple<T>& x) {
  const Matrix<T> l = pencil_at(r, x);
  if constexpr (FieldTraits<T>::exact) {
    return sgn(det(l)) != 0;
  } else {
    return rank(l) == l.rows();
  }
}

bool is_prime(std::size_t k) {
  if (k < 2) return false;
  for (std::size_t d = 2; d * d <= k; ++d) {
    if (k % d == 0) return false;
  }
  return true;
}

std::size_t next_prime_after(std::size_t k) {
  std::size_t p = k + 1;
  while (!is_prime(p)) ++p;
  return p;
}

Thresholds thresholds(std::size_t delta, std::optional<int> degree) {
  Thresholds t;
  t.delta = delta;
  t.n_domain_nonempty = delta > 0 ? delta - 1 : 0;
  t.n_noncentral = 2 * delta;
  t.p = next_prime_after(2 * delta);
  t.q = next_prime_after(t.p);
  t.n_distinct = (t.p - 1) * (t.q - 1);
  const long d = static_cast<long>(delta);
  t.bertrand_bound = 4 * (d - 2) * (2 * d - 5);
  if (degree && *degree >= 0) t.poly_noncentral = static_cast<std::size_t>((*degree + 1) / 2 + 1);
  return t;
}

template Matrix<Rational> pencil_at(const Realization&, const MatrixTuple<Rational>&);
template Matrix<Complex> pencil_at(const Realization&, const MatrixTuple<Complex>&);
template Matrix<Rational> eval_realization(const Realization&, const MatrixTuple<Rational>&);
template Matrix<Complex> eval_realization(const Realization&, const MatrixTuple<Complex>&);
template bool domain_check(const Realization&, const MatrixTuple<Rational>&);
template bool domain_check(const Realization&, const MatrixTuple<Complex>&);

}  // namespace ncw
