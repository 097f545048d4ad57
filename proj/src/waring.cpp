#include "ncwaring/waring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <numeric>

#include "ncwaring/charpoly.hpp"
#include "ncwaring/factorization.hpp"
#include "ncwaring/ncpoly.hpp"
#include "ncwaring/rng.hpp"
#include "ncwaring/similarity.hpp"

namespace ncw {

std::string to_string(DecompositionKind kind) {
  switch (kind) {
    case DecompositionKind::Difference: return "difference";
    case DecompositionKind::LinearTwo: return "linear2";
    case DecompositionKind::LinearThree: return "linear3";
    case DecompositionKind::Quotient: return "quotient";
    case DecompositionKind::ProductTwo: return "product2";
    case DecompositionKind::ProductThree: return "product3";
    case DecompositionKind::ProductTwelve: return "product12";
  }
  return "difference";
}

DecompositionKind parse_kind(std::string_view name) {
  for (auto k : {DecompositionKind::Difference, DecompositionKind::LinearTwo, DecompositionKind::LinearThree,
                 DecompositionKind::Quotient, DecompositionKind::ProductTwo, DecompositionKind::ProductThree,
                 DecompositionKind::ProductTwelve}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::InvalidInput, "unknown decomposition mode '" + std::string(name) + "'");
}

bool is_exact(const AnyDecomposition& d) { return std::holds_alternative<Decomposition<Rational>>(d); }

DecompositionKind kind_of(const AnyDecomposition& d) {
  return std::visit([](const auto& x) { return x.kind; }, d);
}

double residual_of(const AnyDecomposition& d) {
  return std::visit([](const auto& x) { return x.residual; }, d);
}

std::size_t term_count(const AnyDecomposition& d) {
  return std::visit([](const auto& x) { return x.terms.size(); }, d);
}

Decomposition<Complex> to_complex(const Decomposition<Rational>& d) {
  Decomposition<Complex> out;
  out.kind = d.kind;
  out.target = d.target;
  out.residual = d.residual;
  out.seed = d.seed;
  for (const auto& t : d.terms) {
    out.terms.push_back({FieldTraits<Rational>::to_complex(t.coefficient), t.inverted, t.function, to_complex(t.x)});
  }
  return out;
}

namespace {

bool is_product_kind(DecompositionKind k) {
  return k == DecompositionKind::Quotient || k == DecompositionKind::ProductTwo ||
         k == DecompositionKind::ProductThree || k == DecompositionKind::ProductTwelve;
}

template <class T>
Matrix<T> lift(const Matrix<Rational>& m) {
  if constexpr (FieldTraits<T>::exact) {
    return m;
  } else {
    return to_complex(m);
  }
}

template <class T>
MatrixTuple<T> lift(const MatrixTuple<Rational>& x) {
  if constexpr (FieldTraits<T>::exact) {
    return x;
  } else {
    return to_complex(x);
  }
}

std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) { return Rng::stream(seed, stream).next(); }

bool search_failure(const Error& err) {
  return err.code() == ErrorCode::BudgetExhausted || err.code() == ErrorCode::DomainEmpty;
}

struct Witness {
  WitnessCertificate cert;
  bool rational = false;
  std::vector<Rational> spectrum;  // when rational
};

struct WitnessNeeds {
  bool nonzero = false;
  bool nonzero_trace = false;
};

// Rational-spectrum witnesses first (triangular, then general samples) unless
// the float backend is forced; then any witness.
Witness acquire_witness(const RatExpr& e, std::size_t n, WitnessNeeds needs, const WaringOptions& o,
                        std::uint64_t stream) {
  WitnessOptions w;
  w.n = n;
  w.require_nonzero = needs.nonzero;
  w.require_nonzero_trace = needs.nonzero_trace;
  w.box = o.box;
  w.seed = derive(o.seed, stream);
  std::string last;
  if (o.backend != Backend::Float) {
    for (SamplingMode mode : {SamplingMode::UpperTriangular, SamplingMode::General}) {
      w.mode = mode;
      w.require_rational_spectrum = true;
      w.budget = std::min<std::size_t>(o.budget, 200);
      try {
        WitnessCertificate c = find_distinct_eigs(e, w);
        std::vector<Rational> spectrum = *exact_spectrum(c.value);
        return {std::move(c), true, std::move(spectrum)};
      } catch (const Error& err) {
        if (!search_failure(err)) throw;
        last = err.what();
      }
    }
    if (o.backend == Backend::Exact) {
      throw Error(ErrorCode::WitnessNotFound, "no witness with rational spectrum (" + last + ")");
    }
  }
  w.mode = SamplingMode::General;
  w.require_rational_spectrum = false;
  w.budget = o.budget;
  try {
    return {find_distinct_eigs(e, w), false, {}};
  } catch (const Error& err) {
    if (!search_failure(err)) throw;
    throw Error(ErrorCode::WitnessNotFound, err.what());
  }
}

template <class T>
std::vector<T> spectrum_of(const Witness& w) {
  if constexpr (FieldTraits<T>::exact) {
    return w.spectrum;
  } else {
    return eigenvalues(to_complex(w.cert.value));
  }
}

// P x P^-1 where P = pre * C and C carries `value` onto `target`.
template <class T>
MatrixTuple<T> move_onto(const MatrixTuple<T>& x, const Matrix<T>& value, const Matrix<T>& target,
                         const Matrix<T>& pre, const Matrix<T>& pre_inv) {
  const Conjugator<T> c = similarity_between(value, target);
  return conjugate(x, pre * c.p, c.p_inv * pre_inv);
}

template <class T>
MatrixTuple<T> move_onto(const MatrixTuple<T>& x, const Matrix<T>& value, const Matrix<T>& target) {
  const Matrix<T> id = Matrix<T>::identity(value.rows());
  return move_onto(x, value, target, id, id);
}

template <class T>
AnyDecomposition finish(Decomposition<T> d, std::span<const RatExpr> functions, double tolerance) {
  const VerificationReport report = verify(d, functions, tolerance);
  if (!report.pass) throw Error(ErrorCode::VerificationFailed, report.message);
  d.residual = report.residual;
  return d;
}

void require_square(const Matrix<Rational>& m) {
  if (!m.is_square() || m.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "target must be a nonempty square matrix");
}

template <class T>
Decomposition<T> difference_with(const Matrix<Rational>& m, const Witness& w) {
  Decomposition<T> d;
  d.kind = DecompositionKind::Difference;
  d.target = m;
  const MatrixTuple<T> x = lift<T>(w.cert.x);
  const T one = FieldTraits<T>::one();
  if (m == Matrix<Rational>(m.rows(), m.rows())) {
    d.terms = {{one, false, 0, x}, {-one, false, 0, x}};
    return d;
  }
  const Similarity<Rational> zs = zero_diagonal_similarity(m);
  const std::vector<T> lambda = spectrum_of<T>(w);
  const TriangularSplit<T> split = triangular_split<T>(lift<T>(zs.reduced), lambda);
  const Matrix<T> value = lift<T>(w.cert.value);
  const Matrix<T> q = lift<T>(zs.q);
  const Matrix<T> q_inv = lift<T>(inverse(zs.q));
  d.terms = {{one, false, 0, move_onto(x, value, split.upper, q, q_inv)},
             {-one, false, 0, move_onto(x, value, split.lower, q, q_inv)}};
  return d;
}

template <class T>
Decomposition<T> linear_two_with(const Matrix<Rational>& m, const Witness& w) {
  Decomposition<T> d;
  d.kind = DecompositionKind::LinearTwo;
  d.target = m;
  const MatrixTuple<T> x = lift<T>(w.cert.x);
  if (m == w.cert.value) {
    const T half = FieldTraits<T>::from_rational(Rational(1, 2));
    d.terms = {{half, false, 0, x}, {half, false, 0, x}};
    return d;
  }
  const std::vector<T> lambda = spectrum_of<T>(w);
  const std::size_t n = m.rows();
  T sum = FieldTraits<T>::zero();
  for (const auto& l : lambda) sum += l;
  const T two = FieldTraits<T>::from_rational(Rational(2));
  const T alpha = FieldTraits<T>::from_rational(trace(m)) / (two * sum);
  std::vector<T> diag;
  for (const auto& l : lambda) diag.push_back(two * alpha * l);
  const Similarity<T> sim = prescribed_diagonal_similarity<T>(lift<T>(m), diag);
  Matrix<T> d1 = Matrix<T>::diagonal(lambda);
  Matrix<T> d2 = Matrix<T>::diagonal(lambda);
  const T inv_alpha = FieldTraits<T>::one() / alpha;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j > i) d1(i, j) = sim.reduced(i, j) * inv_alpha;
      if (j < i) d2(i, j) = sim.reduced(i, j) * inv_alpha;
    }
  }
  const Matrix<T> value = lift<T>(w.cert.value);
  const Matrix<T> q_inv = inverse(sim.q);
  d.terms = {{alpha, false, 0, move_onto(x, value, d1, sim.q, q_inv)},
             {alpha, false, 0, move_onto(x, value, d2, sim.q, q_inv)}};
  return d;
}

template <class T>
Decomposition<T> linear_three_with(const Matrix<Rational>& m, const Witness& w) {
  const Rational beta = trace(m) / trace(w.cert.value);
  Decomposition<T> diff = difference_with<T>(m - w.cert.value * beta, w);
  Decomposition<T> d;
  d.kind = DecompositionKind::LinearThree;
  d.target = m;
  d.terms.push_back({FieldTraits<T>::from_rational(beta), false, 0, lift<T>(w.cert.x)});
  for (auto& t : diff.terms) d.terms.push_back(std::move(t));
  return d;
}

template <class T>
Decomposition<T> quotient_with(const Matrix<Rational>& m, const Witness& w, std::uint64_t seed) {
  Decomposition<T> d;
  d.kind = DecompositionKind::Quotient;
  d.target = m;
  const MatrixTuple<T> x = lift<T>(w.cert.x);
  const T one = FieldTraits<T>::one();
  if (m == Matrix<Rational>::identity(m.rows())) {
    d.terms = {{one, false, 0, x}, {one, true, 0, x}};
    return d;
  }
  const std::vector<T> lambda = spectrum_of<T>(w);
  std::vector<T> inv;
  for (const auto& l : lambda) inv.push_back(one / l);
  const FactorPair<T> pair = sourour_factor<T>(lift<T>(m), lambda, inv, seed);
  const Matrix<T> value = lift<T>(w.cert.value);
  d.terms = {{one, false, 0, move_onto(x, value, pair.first)},
             {one, true, 0, move_onto(x, value, inverse(pair.second))}};
  return d;
}

template <class T>
std::vector<T> value_spectrum(const Matrix<T>& value) {
  if constexpr (FieldTraits<T>::exact) {
    return *exact_spectrum(value);
  } else {
    return eigenvalues(value);
  }
}

template <class T>
Decomposition<T> product_two_with(const Matrix<Rational>& m, const Witness& w1, const MatrixTuple<T>& x2,
                                  const RatExpr& g, std::uint64_t seed) {
  Decomposition<T> d;
  d.kind = DecompositionKind::ProductTwo;
  d.target = m;
  const Matrix<T> f_value = lift<T>(w1.cert.value);
  const Matrix<T> g_value = eval_expr(g, x2);
  const std::vector<T> beta = spectrum_of<T>(w1);
  const std::vector<T> gamma = value_spectrum(g_value);
  const FactorPair<T> pair = sourour_factor<T>(lift<T>(m), beta, gamma, seed);
  const T one = FieldTraits<T>::one();
  d.terms = {{one, false, 0, move_onto(lift<T>(w1.cert.x), f_value, pair.first)},
             {one, false, 1, move_onto(x2, g_value, pair.second)}};
  return d;
}

// Continued-fraction recovery of a rational within tol of x.
std::optional<Rational> nearby_rational(double x, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  long long h0 = 1, h1 = 0, k0 = 0, k1 = 1;
  double r = x;
  for (int step = 0; step < 40; ++step) {
    const double a = std::floor(r);
    if (std::abs(a) > 1e15) return std::nullopt;
    const auto ai = static_cast<long long>(a);
    const long long h = ai * h0 + h1;
    const long long k = ai * k0 + k1;
    if (k > 100000000LL) return std::nullopt;
    h1 = h0;
    h0 = h;
    k1 = k0;
    k0 = k;
    if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) <= tol) {
      Rational q(static_cast<long>(h), static_cast<long>(k));
      q.canonicalize();
      return q;
    }
    const double frac = r - a;
    if (frac <= 0.0) return std::nullopt;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

// Rational spectrum of a float upper triangular value with determinant s: the
// diagonal is recovered entrywise, except one entry taken as s / (others).
std::optional<std::vector<Rational>> recover_triangular_spectrum(const Matrix<Complex>& value, const Rational& s) {
  if (!is_upper_triangular(value)) return std::nullopt;
  const std::size_t n = value.rows();
  std::vector<std::optional<Rational>> q(n);
  std::vector<std::size_t> failed;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex z = value(i, i);
    const double tol = 1e-10 * std::max(1.0, std::abs(z));
    if (std::abs(z.imag()) <= tol) q[i] = nearby_rational(z.real(), tol);
    if (!q[i]) failed.push_back(i);
  }
  std::vector<std::size_t> candidates = failed;
  if (failed.size() > 1) return std::nullopt;
  if (failed.empty()) {
    candidates.resize(n);
    std::iota(candidates.begin(), candidates.end(), std::size_t{0});
  }
  for (std::size_t j : candidates) {
    std::vector<Rational> out(n);
    Rational rest = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      out[i] = *q[i];
      rest *= out[i];
    }
    if (sgn(rest) == 0) continue;
    out[j] = s / rest;
    const Complex z = value(j, j);
    if (std::abs(FieldTraits<Rational>::to_complex(out[j]) - z) > 1e-8 * std::max(1.0, std::abs(z))) continue;
    bool distinct = true;
    for (std::size_t a = 0; a < n && distinct; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) distinct = distinct && out[a] != out[b];
    }
    if (distinct) return out;
  }
  return std::nullopt;
}

// Product of two values where only X2 is irrational but f(X1), g(X2) both have
// rational spectra: the Sourour factorization runs exactly and only the final
// move of X2 is in floating point.
std::optional<Decomposition<Complex>> hybrid_product_two(const Matrix<Rational>& m, const Witness& w1,
                                                         const MatrixTuple<Complex>& x2, const RatExpr& g,
                                                         const Rational& s, std::uint64_t seed) {
  const Matrix<Complex> g_value = eval_expr(g, x2);
  const auto gamma = recover_triangular_spectrum(g_value, s);
  if (!gamma) return std::nullopt;
  FactorPair<Rational> pair;
  try {
    pair = sourour_factor<Rational>(m, w1.spectrum, *gamma, seed);
  } catch (const Error&) {
    return std::nullopt;
  }
  RationalEigenbasis target = diagonalize_rational(pair.second);
  normalize_columns(target.vectors);
  std::vector<Complex> values;
  for (const auto& v : target.values) values.push_back(FieldTraits<Rational>::to_complex(v));
  const Matrix<Complex> w = eigenvectors_for<Complex>(g_value, values);
  const Matrix<Complex> p = to_complex(target.vectors) * inverse(w);
  const Matrix<Complex> p_inv = w * to_complex(inverse(target.vectors));
  Decomposition<Complex> d;
  d.kind = DecompositionKind::ProductTwo;
  d.target = m;
  const Complex one = FieldTraits<Complex>::one();
  d.terms = {{one, false, 0, to_complex(move_onto(w1.cert.x, w1.cert.value, pair.first))},
             {one, false, 1, conjugate(x2, p, p_inv)}};
  return d;
}

Matrix<Rational> unit_matrix(std::size_t n, std::size_t i, std::size_t j) {
  Matrix<Rational> e(n, n);
  e(i, j) = 1;
  return e;
}

}  // namespace

AnyDecomposition decompose_difference(const RatExpr& f, const Matrix<Rational>& m, const WaringOptions& options) {
  require_square(m);
  if (sgn(trace(m)) != 0) throw Error(ErrorCode::NonzeroTrace, "difference targets must be traceless");
  const std::vector<RatExpr> fs{f};
  if (m == Matrix<Rational>(m.rows(), m.rows())) {
    WitnessOptions wo;
    wo.n = m.rows();
    wo.require_nonzero = false;
    wo.budget = options.budget;
    wo.box = options.box;
    wo.seed = derive(options.seed, 1);
    const WitnessCertificate cert = find_distinct_eigs(f, wo);
    Decomposition<Rational> d;
    d.kind = DecompositionKind::Difference;
    d.target = m;
    d.seed = options.seed;
    d.terms.push_back({Rational(1), false, 0, cert.x});
    d.terms.push_back({Rational(-1), false, 0, cert.x});
    return finish(std::move(d), fs, 0.0);
  }
  const Witness w = acquire_witness(f, m.rows(), {}, options, 1);
  if (w.rational) {
    Decomposition<Rational> d = difference_with<Rational>(m, w);
    d.seed = options.seed;
    return finish(std::move(d), fs, 0.0);
  }
  Decomposition<Complex> d = difference_with<Complex>(m, w);
  d.seed = options.seed;
  return finish(std::move(d), fs, options.tolerance);
}

AnyDecomposition decompose_linear_two(const RatExpr& f, const Matrix<Rational>& m, const WaringOptions& options) {
  require_square(m);
  if (is_scalar_matrix(m)) {
    throw Error(ErrorCode::ScalarTarget, "scalar targets are not covered by two-term linear combinations");
  }
  if (sgn(trace(m)) == 0) throw Error(ErrorCode::ZeroTrace, "traceless target; use the difference mode");
  Witness w;
  try {
    w = acquire_witness(f, m.rows(), {false, true}, options, 2);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::WitnessNotFound) throw;
    throw Error(ErrorCode::TracelessImage, std::string("no value with nonzero trace and distinct eigenvalues: ") + err.what());
  }
  const std::vector<RatExpr> fs{f};
  if (w.rational) {
    Decomposition<Rational> d = linear_two_with<Rational>(m, w);
    d.seed = options.seed;
    return finish(std::move(d), fs, 0.0);
  }
  Decomposition<Complex> d = linear_two_with<Complex>(m, w);
  d.seed = options.seed;
  return finish(std::move(d), fs, options.tolerance);
}

AnyDecomposition decompose_linear_three(const RatExpr& f, const Matrix<Rational>& m, const WaringOptions& options) {
  require_square(m);
  Witness w;
  try {
    w = acquire_witness(f, m.rows(), {false, true}, options, 3);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::WitnessNotFound) throw;
    throw Error(ErrorCode::TracelessImage, std::string("no value with nonzero trace and distinct eigenvalues: ") + err.what());
  }
  const std::vector<RatExpr> fs{f};
  if (w.rational) {
    Decomposition<Rational> d = linear_three_with<Rational>(m, w);
    d.seed = options.seed;
    return finish(std::move(d), fs, 0.0);
  }
  Decomposition<Complex> d = linear_three_with<Complex>(m, w);
  d.seed = options.seed;
  return finish(std::move(d), fs, options.tolerance);
}

AnyDecomposition decompose_quotient(const RatExpr& r, const Matrix<Rational>& m, const WaringOptions& options) {
  require_square(m);
  if (is_scalar_matrix(m) && !(m == Matrix<Rational>::identity(m.rows()))) {
    throw Error(ErrorCode::ScalarTarget, "scalar targets other than I are not covered by quotients");
  }
  if (det(m) != 1) throw Error(ErrorCode::DeterminantNotOne, "quotient targets must have determinant 1");
  const Witness w = acquire_witness(r, m.rows(), {true, false}, options, 4);
  const std::vector<RatExpr> fs{r};
  if (w.rational) {
    Decomposition<Rational> d = quotient_with<Rational>(m, w, options.seed);
    d.seed = options.seed;
    return finish(std::move(d), fs, 0.0);
  }
  Decomposition<Complex> d = quotient_with<Complex>(m, w, options.seed);
  d.seed = options.seed;
  return finish(std::move(d), fs, options.tolerance);
}

Rational balancing_scale(const Rational& s, std::size_t n, int deg) {
  if (deg <= 0 || sgn(s) == 0 || n == 0) return 1;
  const double l = std::log2(std::abs(s.get_d())) / (static_cast<double>(n) * deg);
  const long e = std::lround(l);
  Rational out = 1;
  for (long i = 0; i < std::abs(e); ++i) out *= 2;
  return e < 0 ? Rational(1 / out) : out;
}

AnyTuple solve_det_target(const RatExpr& f, std::size_t n, const Rational& s, const DetTargetOptions& options) {
  const NcPolynomial poly = expr_to_poly(f);
  const int deg = poly.degree();
  if (deg <= 0) throw Error(ErrorCode::ConstantFunction, "f is constant");
  const std::size_t m = f.variables();
  const std::size_t bound = n * static_cast<std::size_t>(deg);
  std::size_t constant_lines = 0;
  // Best float solution over all lines, by relative eigenvalue separation.
  double best_score = 0.0;
  std::optional<MatrixTuple<Complex>> best;
  for (std::size_t attempt = 0; attempt < options.budget; ++attempt) {
    Rng rng = Rng::stream(options.seed, attempt);
    const std::size_t mode = options.triangular_only ? 0 : attempt % 3;
    const SamplingMode base_mode = mode == 0 ? SamplingMode::UpperTriangular : SamplingMode::General;
    MatrixTuple<Rational> x0 = sample_tuple(m, n, options.box, base_mode, rng.next(), 0);
    MatrixTuple<Rational> x1;
    if (mode == 2) {
      x1 = sample_tuple(m, n, options.box, SamplingMode::General, rng.next(), 1);
    } else {
      x1.blocks.assign(m, Matrix<Rational>(n, n));
      const auto c = static_cast<std::size_t>(rng.uniform_int(0, static_cast<long>(m) - 1));
      const auto i = static_cast<std::size_t>(rng.uniform_int(0, static_cast<long>(n) - 1));
      const auto j = mode == 0 ? i : static_cast<std::size_t>(rng.uniform_int(0, static_cast<long>(n) - 1));
      x1.blocks[c] = unit_matrix(n, i, j);
    }
    if (options.scale != 1) {
      for (auto& b : x0.blocks) b = b * options.scale;
      for (auto& b : x1.blocks) b = b * options.scale;
    }
    auto point = [&](const Rational& t) {
      MatrixTuple<Rational> x = x0;
      for (std::size_t k = 0; k < m; ++k) x.blocks[k] += x1.blocks[k] * t;
      return x;
    };
    std::vector<Rational> ts;
    std::vector<Rational> ys;
    for (std::size_t j = 0; j <= bound; ++j) {
      ts.emplace_back(static_cast<long>(j));
      ys.push_back(det(poly.evaluate(point(ts.back()))));
    }
    const UniPoly<Rational> phi = interpolate<Rational>(ts, ys);
    const Rational extra(static_cast<long>(bound + 1));
    if (phi(extra) != det(poly.evaluate(point(extra)))) {
      throw Error(ErrorCode::ConstructionFailed, "determinant along a line exceeded its degree bound");
    }
    if (phi.degree() <= 0) {
      ++constant_lines;
      continue;
    }
    const UniPoly<Rational> psi = phi - UniPoly<Rational>::constant(s);
    if (options.backend != Backend::Float) {
      for (const Rational& t : rational_roots(psi)) {
        MatrixTuple<Rational> x = point(t);
        if (!options.require_distinct || is_squarefree(charpoly(poly.evaluate(x)))) return x;
      }
    }
    if (options.backend == Backend::Exact) continue;
    std::vector<Complex> roots;
    try {
      roots = poly_roots_approx(psi);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::RootsNotConverged) throw;
      continue;
    }
    const MatrixTuple<Complex> c0 = to_complex(x0);
    const MatrixTuple<Complex> c1 = to_complex(x1);

    const UniPoly<Complex> cpsi = to_complex(psi);
    const UniPoly<Complex> dpsi = poly_derivative(cpsi);
    for (Complex t : roots) {
      for (int it = 0; it < 3; ++it) {
        const Complex d = dpsi(t);
        if (std::abs(d) == 0.0) break;
        t -= cpsi(t) / d;
      }
      MatrixTuple<Complex> x = c0;
      for (std::size_t k = 0; k < m; ++k) x.blocks[k] += c1.blocks[k] * t;
      const Matrix<Complex> value = poly.evaluate(x);
      const Complex dv = det(value);
      const Complex target = FieldTraits<Rational>::to_complex(s);
      if (std::abs(dv - target) > 1e-8 * std::max(1.0, std::abs(target))) continue;
      // Relative separation, from each other and from 0: near-singular or
      // clustered values make every later factorization ill-conditioned.
      const std::vector<Complex> ev = eigenvalues(value);
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0, gap = lo;
      for (std::size_t i = 0; i < ev.size(); ++i) {
        lo = std::min(lo, std::abs(ev[i]));
        hi = std::max(hi, std::abs(ev[i]));
        for (std::size_t j = 0; j < i; ++j) gap = std::min(gap, std::abs(ev[i] - ev[j]));
      }
      if (options.require_distinct && gap <= 1e-6) continue;
      const double score = std::min(options.require_distinct ? gap : lo, lo) / std::max(hi, 1e-300);
      if (!best || score > best_score) {
        best_score = score;
        best = std::move(x);
      }
    }
    if (best && best_score >= 0.05) return *best;
  }
  if (best) return *best;
  if (constant_lines == options.budget) {
    throw Error(ErrorCode::ConstantFunction, "det f is constant along every sampled line");
  }
  throw Error(ErrorCode::DegenerateDirections, "no line reached the determinant target within the budget");
}

namespace {

// Rescales X1 by a power of two so that |det f(X1)| is near |det M|^(1/2),
// keeping the split det M = det f(X1) det g(X2) balanced for the float route.
// The witness is kept as is when f is not a polynomial or the scaled value
// loses distinct nonzero eigenvalues.
void balance_witness(const RatExpr& f, Witness& w, const Rational& det_m) {
  if (f.has_inverse()) return;
  const int deg = expr_to_poly(f).degree();
  const Rational df = det(w.cert.value);
  const Rational sigma = balancing_scale(det_m / (df * df), w.cert.n, 2 * deg);
  if (sigma == 1) return;
  MatrixTuple<Rational> x = w.cert.x;
  for (auto& b : x.blocks) b = b * sigma;
  Matrix<Rational> value = eval_expr(f, x);
  UniPoly<Rational> chi = charpoly(value);
  if (sgn(det(value)) == 0 || !is_squarefree(chi)) return;
  w.cert.x = std::move(x);
  w.cert.value = std::move(value);
  w.cert.chi = std::move(chi);
}

}  // namespace

AnyDecomposition decompose_product_two(const RatExpr& f, const RatExpr& g, const Matrix<Rational>& m,
                                       const WaringOptions& options) {
  require_square(m);
  const Rational det_m = det(m);
  if (sgn(det_m) == 0) throw Error(ErrorCode::SingularTarget, "product targets must be invertible");
  if (is_scalar_matrix(m)) {
    throw Error(ErrorCode::ScalarTarget, "scalar targets are not covered by two-factor products");
  }
  const std::size_t n = m.rows();
  const std::vector<RatExpr> fs{f, g};
  std::string last;
  for (std::uint64_t attempt = 0; attempt < 16; ++attempt) {
    WaringOptions o = options;
    o.seed = derive(options.seed, 100 + attempt);
    Witness w1 = acquire_witness(f, n, {true, false}, o, 5);
    if (!w1.rational) balance_witness(f, w1, det_m);
    const Rational s2 = det_m / det(w1.cert.value);
    DetTargetOptions dto;
    dto.backend = options.backend;
    dto.seed = derive(o.seed, 6);
    dto.require_distinct = true;
    dto.box = std::max(3L, o.box);
    dto.scale = balancing_scale(s2, n, expr_to_poly(g).degree());
    AnyTuple x2;
    bool found = false;
    // Triangular lines first: with a rational f-spectrum they keep the
    // factorization exact up to the last conjugation.
    for (bool triangular : {true, false}) {
      if (triangular && !w1.rational) continue;
      dto.triangular_only = triangular;
      try {
        x2 = solve_det_target(g, n, s2, dto);
        found = true;
        break;
      } catch (const Error& err) {
        if (err.code() != ErrorCode::DegenerateDirections) throw;
        last = err.what();
      }
    }
    if (!found) continue;
    const auto* exact_x2 = std::get_if<MatrixTuple<Rational>>(&x2);
    if (w1.rational && exact_x2 && exact_spectrum(eval_expr(g, *exact_x2))) {
      Decomposition<Rational> d = product_two_with<Rational>(m, w1, *exact_x2, g, o.seed);
      d.seed = options.seed;
      return finish(std::move(d), fs, 0.0);
    }
    if (options.backend == Backend::Exact) {
      last = "values do not have rational spectra";
      continue;
    }
    const MatrixTuple<Complex> cx2 = exact_x2 ? to_complex(*exact_x2) : std::get<MatrixTuple<Complex>>(x2);
    if (w1.rational) {
      if (auto h = hybrid_product_two(m, w1, cx2, g, s2, o.seed)) {
        h->seed = options.seed;
        const VerificationReport report = verify(*h, std::span<const RatExpr>(fs), options.tolerance);
        if (report.pass) {
          h->residual = report.residual;
          return *h;
        }
        last = report.message;
      }
    }
    try {
      Decomposition<Complex> d = product_two_with<Complex>(m, w1, cx2, g, o.seed);
      d.seed = options.seed;
      return finish(std::move(d), fs, options.tolerance);
    } catch (const Error& err) {
      // Ill-conditioned spectra: draw a fresh pair.
      if (err.code() != ErrorCode::ConstructionFailed && err.code() != ErrorCode::VerificationFailed &&
          err.code() != ErrorCode::DeterminantMismatch && err.code() != ErrorCode::SingularPrescription) {
        throw;
      }
      last = err.what();
    }
  }
  throw Error(ErrorCode::WitnessNotFound, "no compatible pair of values found: " + last);
}

namespace {

template <class T>
void append_terms(Decomposition<T>& into, const Decomposition<T>& from, std::size_t function_offset) {
  for (auto t : from.terms) {
    t.function += function_offset;
    into.terms.push_back(std::move(t));
  }
}

// Joins pieces in order, in the exact backend when every piece is exact.
AnyDecomposition join(DecompositionKind kind, const Matrix<Rational>& target, const std::vector<AnyDecomposition>& parts,
                      std::uint64_t seed) {
  const bool exact = std::all_of(parts.begin(), parts.end(), [](const auto& p) { return is_exact(p); });
  if (exact) {
    Decomposition<Rational> d;
    d.kind = kind;
    d.target = target;
    d.seed = seed;
    for (const auto& p : parts) append_terms(d, std::get<Decomposition<Rational>>(p), 0);
    return d;
  }
  Decomposition<Complex> d;
  d.kind = kind;
  d.target = target;
  d.seed = seed;
  for (const auto& p : parts) {
    if (is_exact(p)) {
      append_terms(d, to_complex(std::get<Decomposition<Rational>>(p)), 0);
    } else {
      append_terms(d, std::get<Decomposition<Complex>>(p), 0);
    }
  }
  return d;
}

AnyDecomposition single_term(DecompositionKind kind, const Matrix<Rational>& target, const MatrixTuple<Rational>& x,
                             std::size_t function) {
  Decomposition<Rational> d;
  d.kind = kind;
  d.target = target;
  d.terms.push_back({Rational(1), false, function, x});
  return d;
}

AnyDecomposition single_term(DecompositionKind kind, const Matrix<Rational>& target, const AnyTuple& x,
                             std::size_t function) {
  if (const auto* e = std::get_if<MatrixTuple<Rational>>(&x)) return single_term(kind, target, *e, function);
  Decomposition<Complex> d;
  d.kind = kind;
  d.target = target;
  d.terms.push_back({Complex(1.0), false, function, std::get<MatrixTuple<Complex>>(x)});
  return d;
}

AnyDecomposition verified(AnyDecomposition d, std::span<const RatExpr> functions, double tolerance) {
  if (auto* e = std::get_if<Decomposition<Rational>>(&d)) return finish(std::move(*e), functions, 0.0);
  return finish(std::move(std::get<Decomposition<Complex>>(d)), functions, tolerance);
}

}  // namespace

namespace {

AnyDecomposition product_three_once(const RatExpr& f, const RatExpr& g, const RatExpr& h, const Matrix<Rational>& m,
                                    const WaringOptions& options) {
  const Rational det_m = det(m);
  const std::size_t n = m.rows();
  const std::vector<RatExpr> fs{f, g, h};
  const Witness w3 = acquire_witness(h, n, {true, false}, options, 7);
  const Matrix<Rational>& a1 = w3.cert.value;

  if (n == 1) {
    // f(X1) g(X2) h(X3) = m with scalar values: fix X1 and X3, solve for X2.
    const Witness w1 = acquire_witness(f, 1, {true, false}, options, 8);
    const Rational s = det_m / (det(w1.cert.value) * det(a1));
    DetTargetOptions dto;
    dto.backend = options.backend;
    dto.seed = derive(options.seed, 9);
    const AnyTuple x2 = solve_det_target(g, 1, s, dto);
    std::vector<AnyDecomposition> parts{single_term(DecompositionKind::ProductThree, m, w1.cert.x, 0),
                                        single_term(DecompositionKind::ProductThree, m, x2, 1),
                                        single_term(DecompositionKind::ProductThree, m, w3.cert.x, 2)};
    return verified(join(DecompositionKind::ProductThree, m, parts, options.seed), fs, options.tolerance);
  }

  // A2 = S A1 S^-1 linearly independent of A1.
  Rng rng(derive(options.seed, 10));
  Matrix<Rational> s_mat;
  Matrix<Rational> s_inv;
  for (int attempt = 0;; ++attempt) {
    if (attempt == 100) throw Error(ErrorCode::ConstructionFailed, "no conjugate independent of the witness value");
    s_mat = Matrix<Rational>(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) s_mat(i, j) = rng.uniform_int(-3, 3);
    }
    if (sgn(det(s_mat)) == 0) continue;
    s_inv = inverse(s_mat);
    const Matrix<Rational> a2 = s_mat * a1 * s_inv;
    Matrix<Rational> stacked(n * n, 2);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        stacked(i * n + j, 0) = a1(i, j);
        stacked(i * n + j, 1) = a2(i, j);
      }
    }
    if (rank(stacked) == 2) break;
  }
  const MatrixTuple<Rational> x_a2 = conjugate(w3.cert.x, s_mat, s_inv);
  for (const auto* choice : {&w3.cert.x, &x_a2}) {
    const Matrix<Rational> a = choice == &w3.cert.x ? a1 : s_mat * a1 * s_inv;
    const Matrix<Rational> rest = m * inverse(a);
    if (is_scalar_matrix(rest)) continue;
    WaringOptions o = options;
    o.seed = derive(options.seed, 11);
    const AnyDecomposition fg = decompose_product_two(f, g, rest, o);
    std::vector<AnyDecomposition> parts{fg, single_term(DecompositionKind::ProductThree, m, *choice, 2)};
    return verified(join(DecompositionKind::ProductThree, m, parts, options.seed), fs, options.tolerance);
  }
  throw Error(ErrorCode::ConstructionFailed, "both conjugates left a scalar cofactor");
}

}  // namespace

AnyDecomposition decompose_product_three(const RatExpr& f, const RatExpr& g, const RatExpr& h,
                                         const Matrix<Rational>& m, const WaringOptions& options) {
  require_square(m);
  if (sgn(det(m)) == 0) throw Error(ErrorCode::SingularTarget, "product targets must be invertible");
  std::string last;
  for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
    WaringOptions o = options;
    if (attempt > 0) o.seed = derive(options.seed, 200 + attempt);
    try {
      AnyDecomposition d = product_three_once(f, g, h, m, o);
      std::visit([&](auto& x) { x.seed = options.seed; }, d);
      return d;
    } catch (const Error& err) {
      // Float error grows with the conditioning of the chosen values; redraw.
      if (err.code() != ErrorCode::VerificationFailed && err.code() != ErrorCode::ConstructionFailed) throw;
      last = err.what();
    }
  }
  throw Error(ErrorCode::VerificationFailed, "no attempt verified: " + last);
}

namespace {

// Permutation matrix P with P diag(v[order]) P^-1 = diag(v): P e_i = e_order[i].
Matrix<Rational> permutation(const std::vector<std::size_t>& order) {
  const std::size_t n = order.size();
  Matrix<Rational> p(n, n);
  for (std::size_t i = 0; i < n; ++i) p(order[i], i) = 1;
  return p;
}

// Three factors whose product is P diag(values) P^-1, for at least n0 nonzero
// values: the nonzero part diag(lambda_1..lambda_k) splits into three values
// at size k, and each input tuple is padded by the scalar root blocks.
AnyDecomposition diagonal_three(const RatExpr& f, const std::vector<Rational>& values, const Matrix<Rational>& p,
                                const std::vector<Rational>& root, const WaringOptions& options) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(values[i]) != 0) order.push_back(i);
  }
  const std::size_t k = order.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(values[i]) == 0) order.push_back(i);
  }
  std::vector<Rational> nonzero;
  for (std::size_t i = 0; i < k; ++i) nonzero.push_back(values[order[i]]);
  const AnyDecomposition three = decompose_product_three(f, f, f, Matrix<Rational>::diagonal(nonzero), options);
  const Matrix<Rational> conj = p * permutation(order);
  const Matrix<Rational> conj_inv = inverse(conj);
  auto pad = [&](const auto& x, auto lift_scalar) {
    using Tuple = std::decay_t<decltype(x)>;
    Tuple out;
    for (std::size_t j = 0; j < x.blocks.size(); ++j) {
      auto block = x.blocks[j];
      if (k < n) {
        using Mat = std::decay_t<decltype(block)>;
        block = direct_sum(block, Mat::scalar(n - k, lift_scalar(root[j])));
      }
      out.blocks.push_back(std::move(block));
    }
    return out;
  };
  if (const auto* e = std::get_if<Decomposition<Rational>>(&three)) {
    Decomposition<Rational> d = *e;
    d.target = p * Matrix<Rational>::diagonal(values) * inverse(p);
    for (auto& t : d.terms) {
      t.function = 0;
      t.x = conjugate(pad(t.x, [](const Rational& a) { return a; }), conj, conj_inv);
    }
    return d;
  }
  Decomposition<Complex> d = std::get<Decomposition<Complex>>(three);
  d.target = p * Matrix<Rational>::diagonal(values) * inverse(p);
  const Matrix<Complex> cc = to_complex(conj);
  const Matrix<Complex> cc_inv = to_complex(conj_inv);
  for (auto& t : d.terms) {
    t.function = 0;
    t.x = conjugate(pad(t.x, [](const Rational& a) { return FieldTraits<Rational>::to_complex(a); }), cc, cc_inv);
  }
  return d;
}

bool is_rational_square(const Rational& q) {
  if (sgn(q) < 0) return false;
  return mpz_perfect_square_p(q.get_num_mpz_t()) != 0 && mpz_perfect_square_p(q.get_den_mpz_t()) != 0;
}

// At most six factors for a diagonalizable matrix with rational spectrum.
// A spare zero slot can take c = prod(lambda), which makes the nonzero
// determinants squares; x^2-like functions then stay on exact routes.
std::vector<AnyDecomposition> diagonalizable_factors(const RatExpr& f, const Matrix<Rational>& d,
                                                     const std::vector<Rational>& root, std::size_t n0,
                                                     const WaringOptions& options) {
  const std::size_t n = d.rows();
  const RationalEigenbasis eb = diagonalize_rational(d);
  std::size_t k = 0;
  Rational c = 1;
  for (const auto& v : eb.values) {
    k += sgn(v) != 0;
    if (sgn(v) != 0) c *= v;
  }
  if (k >= n0 && (k == n || is_rational_square(c))) return {diagonal_three(f, eb.values, eb.vectors, root, options)};
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(eb.values[i]) != 0) order.push_back(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(eb.values[i]) == 0) order.push_back(i);
  }
  std::vector<Rational> d1(n, Rational(0));
  std::vector<Rational> d2(n, Rational(0));
  if (k >= n0) {
    // diag(lambda, 0) = diag(lambda, c, 0..) * diag(1.., 0, 1..).
    for (std::size_t i = 0; i < n; ++i) {
      d1[i] = i < k ? eb.values[order[i]] : (i == k ? c : Rational(0));
      d2[i] = i == k ? Rational(0) : Rational(1);
    }
  }
  // Otherwise diag(lambda, 0) = diag(lambda, c, 1.., 0..) * diag(1.., 0.., 1..), both of rank >= n0.
  for (std::size_t i = 0; i < n && k < n0; ++i) {
    if (i < k) {
      d1[i] = eb.values[order[i]];
      d2[i] = 1;
    } else if (i < n0) {
      d1[i] = i == k && !is_rational_square(c) ? c : Rational(1);
    } else {
      d2[i] = 1;
    }
  }
  const Matrix<Rational> p = eb.vectors * permutation(order);
  WaringOptions o1 = options;
  o1.seed = derive(options.seed, 21);
  WaringOptions o2 = options;
  o2.seed = derive(options.seed, 22);
  return {diagonal_three(f, d1, p, root, o1), diagonal_three(f, d2, p, root, o2)};
}

}  // namespace

AnyDecomposition decompose_product_twelve(const RatExpr& f, const Matrix<Rational>& m, const WaringOptions& options) {
  require_square(m);
  const NcPolynomial poly = expr_to_poly(f);
  if (poly.is_zero()) throw Error(ErrorCode::NoScalarRoot, "f is the zero polynomial");
  const auto root = scalar_root(poly);
  if (!root) throw Error(ErrorCode::NoScalarRoot, "no scalar root found for " + poly.to_string());
  const std::size_t n = m.rows();
  const std::size_t n0 = std::max<std::size_t>(1, options.n0);
  if (n < 2 * n0) {
    throw Error(ErrorCode::ThresholdTooLarge,
                "n = " + std::to_string(n) + " is below 2 N0 = " + std::to_string(2 * n0));
  }
  const std::vector<RatExpr> fs{f};
  if (sgn(det(m)) != 0) {
    // Three values already suffice for invertible targets.
    AnyDecomposition three = decompose_product_three(f, f, f, m, options);
    std::visit(
        [](auto& d) {
          d.kind = DecompositionKind::ProductTwelve;
          for (auto& t : d.terms) t.function = 0;
        },
        three);
    return verified(std::move(three), fs, options.twelve_tolerance);
  }
  std::string last;
  for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
    const DiagonalizableFactors dd =
        two_diagonalizable_factor(m, {true, attempt == 0 ? options.seed : derive(options.seed, 60 + attempt)});
    WaringOptions o1 = options;
    o1.seed = derive(options.seed, 31 + 2 * attempt);
    WaringOptions o2 = options;
    o2.seed = derive(options.seed, 32 + 2 * attempt);
    try {
      std::vector<AnyDecomposition> parts;
      for (auto& piece : diagonalizable_factors(f, dd.d1, *root, n0, o1)) parts.push_back(std::move(piece));
      for (auto& piece : diagonalizable_factors(f, dd.d2, *root, n0, o2)) parts.push_back(std::move(piece));
      return verified(join(DecompositionKind::ProductTwelve, m, parts, options.seed), fs, options.twelve_tolerance);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::VerificationFailed) throw;
      last = err.what();
    }
  }
  throw Error(ErrorCode::VerificationFailed, "no attempt verified: " + last);
}

template <class T>
Matrix<T> replay(const Decomposition<T>& d, std::span<const RatExpr> functions) {
  const std::size_t n = d.target.rows();
  const bool product = is_product_kind(d.kind);
  Matrix<T> acc = product ? Matrix<T>::identity(n) : Matrix<T>(n, n);
  for (const auto& t : d.terms) {
    if (t.function >= functions.size()) throw Error(ErrorCode::InvalidInput, "term refers to a missing function");
    Matrix<T> v = eval_expr(functions[t.function], t.x);
    if (product) {
      if (t.inverted) v = inverse(v);
      acc = acc * v * t.coefficient;
    } else {
      acc += v * t.coefficient;
    }
  }
  return acc;
}

template <class T>
VerificationReport verify(const Decomposition<T>& d, std::span<const RatExpr> functions, double tolerance) {
  VerificationReport report;
  Matrix<T> value;
  try {
    value = replay(d, functions);
  } catch (const Error& err) {
    report.residual = std::numeric_limits<double>::infinity();
    report.message = std::string("replay failed: ") + err.what();
    return report;
  }
  const Matrix<T> target = lift<T>(d.target);
  if (value.rows() != target.rows()) {
    report.residual = std::numeric_limits<double>::infinity();
    report.message = "replay has the wrong size";
    return report;
  }
  report.residual = max_abs_diff(value, target) / std::max(1.0, target.max_abs());
  if constexpr (FieldTraits<T>::exact) {
    report.pass = value == target;
  } else {
    report.pass = report.residual <= tolerance;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", report.residual);
  report.message = (report.pass ? "verified" : "mismatch") + std::string(", residual ") + buf;
  return report;
}

VerificationReport verify(const AnyDecomposition& d, std::span<const RatExpr> functions, double tolerance) {
  return std::visit([&](const auto& x) { return verify(x, functions, tolerance); }, d);
}

template Matrix<Rational> replay(const Decomposition<Rational>&, std::span<const RatExpr>);
template Matrix<Complex> replay(const Decomposition<Complex>&, std::span<const RatExpr>);
template VerificationReport verify(const Decomposition<Rational>&, std::span<const RatExpr>, double);
template VerificationReport verify(const Decomposition<Complex>&, std::span<const RatExpr>, double);

}  // namespace ncw
