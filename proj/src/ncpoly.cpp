#include "ncwaring/ncpoly.hpp"

#include <algorithm>

#include "ncwaring/unipoly.hpp"

namespace ncw {

NcPolynomial NcPolynomial::constant(const Rational& c, std::size_t m) {
  NcPolynomial p(m);
  p.add_term({}, c);
  return p;
}

NcPolynomial NcPolynomial::variable(std::size_t index, std::size_t m) {
  NcPolynomial p(m);
  p.add_term({index}, Rational(1));
  return p;
}

int NcPolynomial::degree() const {
  int d = -1;
  for (const auto& [w, c] : terms_) d = std::max(d, static_cast<int>(w.size()));
  return d;
}

Rational NcPolynomial::constant_term() const { return coefficient({}); }

Rational NcPolynomial::coefficient(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Rational(0) : it->second;
}

void NcPolynomial::add_term(const Word& w, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

NcPolynomial& NcPolynomial::operator+=(const NcPolynomial& o) {
  m_ = std::max(m_, o.m_);
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

NcPolynomial& NcPolynomial::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, v] : terms_) v *= c;
  return *this;
}

NcPolynomial operator*(const NcPolynomial& a, const NcPolynomial& b) {
  NcPolynomial out(std::max(a.m_, b.m_));
  for (const auto& [wa, ca] : a.terms_) {
    for (const auto& [wb, cb] : b.terms_) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      out.add_term(w, ca * cb);
    }
  }
  return out;
}

Rational NcPolynomial::eval_scalar(std::span<const Rational> alpha) const {
  Rational acc = 0;
  for (const auto& [w, c] : terms_) {
    Rational t = c;
    for (std::size_t i : w) t *= alpha[i - 1];
    acc += t;
  }
  return acc;
}

template <class T>
Matrix<T> NcPolynomial::evaluate(const MatrixTuple<T>& x) const {
  const std::size_t n = x.dimension();
  Matrix<T> acc(n, n);
  for (const auto& [w, c] : terms_) {
    Matrix<T> t = Matrix<T>::scalar(n, FieldTraits<T>::from_rational(c));
    for (std::size_t i : w) t = t * x.blocks[i - 1];
    acc += t;
  }
  return acc;
}

std::string NcPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [w, c] : terms_) {
    const bool negative = sgn(c) < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (s.empty()) {
      s = negative ? "-" : "";
    } else {
      s += negative ? " - " : " + ";
    }
    std::string word;
    for (std::size_t i = 0; i < w.size(); ++i) word += (i ? "*x" : "x") + std::to_string(w[i]);
    if (w.empty()) {
      s += ncw::to_string(mag);
    } else if (mag == 1) {
      s += word;
    } else {
      s += ncw::to_string(mag) + "*" + word;
    }
  }
  return s;
}

namespace {

NcPolynomial expand(const ExprNode& n, std::size_t m) {
  switch (n.kind) {
    case ExprKind::Constant: return NcPolynomial::constant(n.constant, m);
    case ExprKind::Variable: return NcPolynomial::variable(n.variable, m);
    case ExprKind::Sum: {
      NcPolynomial acc(m);
      for (const auto& c : n.children) acc += expand(*c, m);
      return acc;
    }
    case ExprKind::Product: {
      NcPolynomial acc = NcPolynomial::constant(Rational(1), m);
      for (const auto& c : n.children) acc = acc * expand(*c, m);
      return acc;
    }
    case ExprKind::Negate: return expand(*n.children[0], m) * Rational(-1);
    case ExprKind::Inverse: {
      const NcPolynomial inner = expand(*n.children[0], m);
      if (inner.degree() == 0) return NcPolynomial::constant(1 / inner.constant_term(), m);
      throw Error(ErrorCode::NotPolynomial, "expression contains an inverse");
    }
  }
  throw Error(ErrorCode::InvalidInput, "corrupt expression node");
}

}  // namespace

NcPolynomial expr_to_poly(const RatExpr& e) { return expand(e.root(), e.variables()); }

std::optional<std::vector<Rational>> scalar_root(const NcPolynomial& f, long box) {
  const std::size_t m = f.variables();
  std::vector<Rational> zeros(m, Rational(0));
  if (sgn(f.constant_term()) == 0) return zeros;
  if (f.degree() <= 0) return std::nullopt;

  // Keep the grid below ~2e5 points.
  long b = std::max(1L, box);
  auto grid_size = [&](long bb) {
    double s = 1;
    for (std::size_t i = 0; i < m; ++i) s *= static_cast<double>(2 * bb + 1);
    return s;
  };
  while (b > 1 && grid_size(b) > 2e5) --b;
  std::vector<long> values{0};
  for (long v = 1; v <= b; ++v) {
    values.push_back(v);
    values.push_back(-v);
  }
  // Tuples of indices into `values`, ordered by height then lexicographically.
  std::vector<std::vector<std::size_t>> tuples;
  if (grid_size(b) <= 2e5) {
    std::vector<std::size_t> idx(m, 0);
    while (true) {
      tuples.push_back(idx);
      std::size_t k = 0;
      while (k < m && ++idx[k] == values.size()) idx[k++] = 0;
      if (k == m) break;
    }
    auto height = [&](const std::vector<std::size_t>& t) {
      std::size_t h = 0;
      for (std::size_t i : t) h = std::max(h, (i + 1) / 2);
      return h;
    };
    std::stable_sort(tuples.begin(), tuples.end(), [&](const auto& a, const auto& c) {
      const auto ha = height(a);
      const auto hc = height(c);
      return ha != hc ? ha < hc : a < c;
    });
  }
  std::vector<Rational> alpha(m);
  for (const auto& t : tuples) {
    for (std::size_t i = 0; i < m; ++i) alpha[i] = values[t[i]];
    if (sgn(f.eval_scalar(alpha)) == 0) return alpha;
  }

  // Univariate solves in one variable with the others on {0, 1, -1}.
  const std::vector<long> small{0, 1, -1};
  for (std::size_t var = 0; var < m; ++var) {
    std::size_t combos = 1;
    for (std::size_t i = 0; i + 1 < m; ++i) combos *= small.size();
    for (std::size_t code = 0; code < combos; ++code) {
      std::size_t rest = code;
      for (std::size_t i = 0; i < m; ++i) {
        if (i == var) continue;
        alpha[i] = small[rest % small.size()];
        rest /= small.size();
      }
      std::vector<Rational> coeffs(static_cast<std::size_t>(f.degree()) + 1, Rational(0));
      for (const auto& [w, c] : f.terms()) {
        Rational t = c;
        std::size_t power = 0;
        for (std::size_t i : w) {
          if (i - 1 == var) {
            ++power;
          } else {
            t *= alpha[i - 1];
          }
        }
        coeffs[power] += t;
      }
      const UniPoly<Rational> u(std::move(coeffs));
      if (u.degree() < 1) continue;
      const auto roots = rational_roots(u);
      if (!roots.empty()) {
        alpha[var] = roots.front();
        return alpha;
      }
    }
  }
  return std::nullopt;
}

template Matrix<Rational> NcPolynomial::evaluate(const MatrixTuple<Rational>&) const;
template Matrix<Complex> NcPolynomial::evaluate(const MatrixTuple<Complex>&) const;

}  // namespace ncw
