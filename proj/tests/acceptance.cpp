// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <path-to-ncwaring-cli>

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ncwaring/charpoly.hpp"
#include "ncwaring/factorization.hpp"
#include "ncwaring/json_io.hpp"
#include "ncwaring/realization.hpp"
#include "ncwaring/rng.hpp"
#include "ncwaring/unipoly.hpp"
#include "ncwaring/waring.hpp"
#include "ncwaring/witness.hpp"

using namespace ncw;
namespace fs = std::filesystem;

namespace {

using Mat = Matrix<Rational>;
using Poly = UniPoly<Rational>;

constexpr double kTol = 1e-8;
constexpr double kTwelveTol = 1e-6;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures; the first few messages end up in the report line.
struct Check {
  std::size_t failures = 0;
  std::string first;
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ < 3) first += (first.empty() ? "" : "; ") + what;
  }
  Outcome done(const std::string& summary) const {
    if (failures == 0) return {true, summary};
    return {false, summary + " | " + std::to_string(failures) + " failure(s): " + first};
  }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::optional<Mat> try_eval(const RatExpr& e, const MatrixTuple<Rational>& x) {
  try {
    return eval_expr(e, x);
  } catch (const Error& err) {
    if (err.code() == ErrorCode::DomainError) return std::nullopt;
    throw;
  }
}

Mat random_matrix(std::size_t n, long box, std::uint64_t seed, std::uint64_t index) {
  return sample_tuple(1, n, box, SamplingMode::General, seed, index).blocks[0];
}

Mat random_invertible_nonscalar(std::size_t n, std::uint64_t seed, std::uint64_t index) {
  for (std::uint64_t k = 0;; ++k) {
    Mat m = random_matrix(n, 5, seed, index * 1000 + k);
    if (det(m) != 0 && !is_scalar_matrix(m)) return m;
  }
}

Mat random_rank(std::size_t n, std::size_t r, std::uint64_t seed, std::uint64_t index) {
  for (std::uint64_t k = 0;; ++k) {
    if (r == 0) return Mat(n, n);
    const Mat a = random_matrix(n, 3, seed, index * 1000 + 2 * k);
    const Mat b = random_matrix(n, 3, seed, index * 1000 + 2 * k + 1);
    Mat left(n, r), right(r, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < r; ++j) left(i, j) = a(i, j), right(j, i) = b(j, i);
    Mat m = left * right;
    if (rank(m) == r) return m;
  }
}

Poly random_poly(Rng& rng, int degree, long box) {
  std::vector<Rational> c(degree + 1);
  for (auto& a : c) {
    a = Rational(rng.uniform_int(-box, box), rng.uniform_int(1, 3));
    a.canonicalize();
  }
  if (c.back() == 0) c.back() = 1;
  return Poly(c);
}

bool is_product_kind(DecompositionKind k) {
  return k == DecompositionKind::Quotient || k == DecompositionKind::ProductTwo ||
         k == DecompositionKind::ProductThree || k == DecompositionKind::ProductTwelve;
}

// Replay from the terms alone, without the library's replay or verify.
template <class T>
Matrix<T> replay_terms(const Decomposition<T>& d, const std::vector<RatExpr>& fs, std::size_t n) {
  const bool product = is_product_kind(d.kind);
  Matrix<T> acc = product ? Matrix<T>::identity(n) : Matrix<T>(n, n);
  for (const auto& t : d.terms) {
    Matrix<T> v = eval_expr(fs.at(t.function), t.x);
    if (t.inverted) v = inverse(v);
    acc = product ? Matrix<T>(acc * v) : Matrix<T>(acc + v * t.coefficient);
  }
  return acc;
}

// Residual of an independent replay: 0 for exact equality, +inf for an exact mismatch.
double independent_residual(const AnyDecomposition& any, const std::vector<RatExpr>& fs, const Mat& target) {
  if (const auto* d = std::get_if<Decomposition<Rational>>(&any))
    return replay_terms(*d, fs, target.rows()) == target ? 0.0 : std::numeric_limits<double>::infinity();
  const auto& d = std::get<Decomposition<Complex>>(any);
  return max_abs_diff(replay_terms(d, fs, target.rows()), to_complex(target)) / std::max(1.0, target.max_abs());
}

struct DecompTally {
  std::size_t exact = 0;
  std::size_t floating = 0;
  double worst = 0.0;
  std::string summary() const {
    return std::to_string(exact) + " exact, " + std::to_string(floating) + " float, worst residual " + sci(worst);
  }
};

// Runs one decomposition and checks it against the target at the given tolerance.
void check_decomposition(Check& chk, DecompTally& tally, const std::string& label,
                         const std::function<AnyDecomposition()>& make, const std::vector<RatExpr>& fs,
                         const Mat& target, double tol, std::optional<std::size_t> terms = std::nullopt) {
  try {
    const AnyDecomposition d = make();
    const double r = independent_residual(d, fs, target);
    const bool lib = verify(d, fs, tol).pass;
    (is_exact(d) ? tally.exact : tally.floating)++;
    tally.worst = std::max(tally.worst, r);
    chk.expect(r <= tol && lib, label + " residual " + sci(r));
    if (terms) chk.expect(term_count(d) <= *terms, label + " used " + std::to_string(term_count(d)) + " terms");
  } catch (const Error& e) {
    chk.expect(false, label + " threw " + e.what());
  }
}

// 1 ------------------------------------------------------------------------

Outcome realization_correctness() {
  Check chk;
  const std::vector<std::string> corpus{
      "x1^2 + x1*x2 - x2*x1 - x1 + 2",
      "(x1*x2^-1*x1 - x2)^-1 - x2^-1",
      "x2*(1-x1*x2)^-1*x1",
      "(x1^-1*x2^-1-1)^-1",
      "x1*x2 - x2*x1",
      "x1^-1",
      "(x1 + x2)^-1 + x1^-1*x2",
      "3/2*x1^3 - x2",
      "((x1*x2 - x2*x1)^-1 + x1)^-1",
      "x1 + x2^-1",
      "(1 + x1*x2^-1)^-1*x2",
      "-x1*(x2 - 2)^-1*x1 + 5",
  };
  std::size_t compared = 0;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const RatExpr e = parse(corpus[k], 2);
    const Realization r = from_expr(e);
    std::size_t agreed = 0;
    for (std::uint64_t t = 0; agreed < 100 && t < 5000; ++t) {
      const auto x = sample_tuple(2, 2 + t % 3, 5, SamplingMode::General, 1000 + k, t);
      const auto direct = try_eval(e, x);
      if (!direct || !domain_check(r, x)) continue;
      chk.expect(eval_realization(r, x) == *direct, "mismatch on " + corpus[k]);
      ++agreed;
    }
    chk.expect(agreed == 100, corpus[k] + " reached only " + std::to_string(agreed) + " in-domain tuples");
    compared += agreed;
  }

  // The equivalent pair: (x1^-1 x2^-1 - 1)^-1 = [x1^-1 (1 - x1 x2) x2^-1]^-1 = x2 (1 - x1 x2)^-1 x1.
  const RatExpr lhs = parse("x2*(1-x1*x2)^-1*x1");
  const RatExpr rhs = parse("(x1^-1*x2^-1-1)^-1");
  std::size_t joint = 0;
  for (std::uint64_t t = 0; t < 300; ++t) {
    const auto x = sample_tuple(2, 2 + t % 3, 5, SamplingMode::General, 1100, t);
    const auto a = try_eval(lhs, x);
    const auto b = try_eval(rhs, x);
    if (!a || !b) continue;
    chk.expect(*a == *b, "equivalent pair disagrees");
    ++joint;
  }
  chk.expect(joint >= 100, "too few jointly defined points");

  // As printed, with x2 as the last factor, the pair already differs at the scalars (2, 3).
  const MatrixTuple<Rational> s{{Mat{{2}}, Mat{{3}}}};
  const bool printed_differs = eval_expr(parse("x2*(1-x1*x2)^-1*x2"), s) != eval_expr(rhs, s);
  chk.expect(printed_differs, "printed pair unexpectedly agrees at (2, 3)");

  return chk.done(std::to_string(corpus.size()) + " expressions x 100 tuples (" + std::to_string(compared) +
                  " exact comparisons, n = 2..4); x2(1-x1x2)^-1x1 = (x1^-1x2^-1-1)^-1 on " + std::to_string(joint) +
                  " joint points; the printed variant x2(1-x1x2)^-1x2 differs (-9/5 vs -6/5 at (2,3)), so the pair"
                  " is checked with x1 as the last factor");
}

// 2 ------------------------------------------------------------------------

Outcome inverse_size_law() {
  Check chk;
  // Realizations of sizes 1..6 from the structural rules.
  const std::vector<std::string> exprs{"x1^-1", "x1", "x1 + x2^-1", "x1 + x2", "x1 + x2 + x1^-1", "x1 + x2 + x1"};
  std::string sizes;
  for (std::size_t k = 0; k < exprs.size(); ++k) {
    const Realization r = from_expr(parse(exprs[k], 2));
    chk.expect(r.delta() == k + 1, exprs[k] + " has size " + std::to_string(r.delta()));
    const Realization t = commutator_inverse(r);
    chk.expect(t.delta() == 2 * r.delta() + 1, "size " + std::to_string(r.delta()) + " -> " + std::to_string(t.delta()));
    sizes += (sizes.empty() ? "" : ", ") + std::to_string(r.delta()) + "->" + std::to_string(t.delta());
    // The realization must also represent (x0 r - r x0)^-1.
    std::string shifted;
    for (std::size_t i = 0; i < exprs[k].size(); ++i) {
      const char ch = exprs[k][i];
      shifted += (i > 0 && exprs[k][i - 1] == 'x') ? static_cast<char>(ch + 1) : ch;
    }
    const RatExpr direct = parse("(x1*(" + shifted + ") - (" + shifted + ")*x1)^-1", 3);
    std::size_t agreed = 0;
    for (std::uint64_t s = 0; agreed < 5 && s < 200; ++s) {
      const auto x = sample_tuple(3, 3, 5, SamplingMode::General, 2000 + k, s);
      const auto v = try_eval(direct, x);
      if (!v || !domain_check(t, x)) continue;
      chk.expect(eval_realization(t, x) == *v, "commutator inverse mismatch for " + exprs[k]);
      ++agreed;
    }
    chk.expect(agreed == 5, "no in-domain points for " + exprs[k]);
  }
  return chk.done("sizes " + sizes + ", each cross-evaluated against (x0 r - r x0)^-1");
}

// 3 ------------------------------------------------------------------------

Outcome threshold_arithmetic() {
  Check chk;
  const Thresholds t = thresholds(4);
  chk.expect(t.bertrand_bound == 24, "bertrand_bound " + std::to_string(t.bertrand_bound));
  chk.expect(t.bertrand_bound == 4L * (4 - 2) * (2 * 4 - 5), "bertrand formula");
  chk.expect(t.n_distinct == (t.p - 1) * (t.q - 1), "n_distinct formula");
  auto prime = [](std::size_t k) {
    if (k < 2) return false;
    for (std::size_t d = 2; d * d <= k; ++d)
      if (k % d == 0) return false;
    return true;
  };
  std::size_t p = 9;
  while (!prime(p)) ++p;
  std::size_t q = p + 1;
  while (!prime(q)) ++q;
  chk.expect(t.p == p && t.q == q, "primes " + std::to_string(t.p) + ", " + std::to_string(t.q));
  for (int d = 1; d <= 10; ++d) {
    const auto s = thresholds(4, d).poly_noncentral;
    const std::size_t expected = static_cast<std::size_t>(d / 2 + (d % 2) + 1);
    chk.expect(s && *s == expected, "poly threshold at d = " + std::to_string(d));
  }
  return chk.done("delta = 4: bertrand_bound " + std::to_string(t.bertrand_bound) + ", (p, q) = (" +
                  std::to_string(t.p) + ", " + std::to_string(t.q) + "), n_distinct " + std::to_string(t.n_distinct) +
                  "; ceil(d/2)+1 for d = 1..10");
}

// 4 ------------------------------------------------------------------------

Outcome discriminant_laws() {
  Check chk;
  Rng rng(4);
  std::size_t pairs = 0;
  while (pairs < 200) {
    const Poly f = random_poly(rng, static_cast<int>(rng.uniform_int(1, 4)), 5);
    const Poly g = random_poly(rng, static_cast<int>(rng.uniform_int(1, 4)), 5);
    if (!rational_roots(poly_gcd(f, g)).empty()) continue;
    ++pairs;
    const Poly fg = f * g;
    const Rational res = resultant(f, g);
    const int df = f.degree(), dg = g.degree();
    // Unsigned discriminant lc^-1 res(h, h'), for which the identity carries (-1)^(deg f deg g).
    auto unsigned_disc = [](const Poly& h) -> Rational { return resultant(h, poly_derivative(h)) / h.leading(); };
    const Rational sign = (df * dg) % 2 == 0 ? Rational(1) : Rational(-1);
    chk.expect(unsigned_disc(fg) == sign * unsigned_disc(f) * unsigned_disc(g) * res * res, "product law (unsigned)");
    chk.expect(discriminant(fg) == discriminant(f) * discriminant(g) * res * res, "product law (signed)");
  }
  std::size_t squarefree = 0, repeated = 0;
  for (std::size_t k = 0; k < 200; ++k) {
    Poly f = random_poly(rng, static_cast<int>(rng.uniform_int(1, 4)), 5);
    if (k % 2 == 1) {
      const Poly l = random_poly(rng, 1, 5);
      f = f * l * l;
    }
    const bool sf = is_squarefree(f);
    const bool gcd_sf = poly_gcd(f, poly_derivative(f)).degree() == 0;
    chk.expect(sf == (discriminant(f) != 0), "squarefree <=> disc != 0");
    chk.expect(sf == gcd_sf, "squarefree vs gcd oracle");
    (sf ? squarefree : repeated)++;
  }
  return chk.done("200 pairs: disc(fg) = (-1)^(deg f deg g) disc(f) disc(g) res(f,g)^2 for lc^-1 res(f,f'), and"
                  " without the sign for the signed convention; 200 polynomials (" + std::to_string(squarefree) +
                  " squarefree, " + std::to_string(repeated) + " not)");
}

// 5 ------------------------------------------------------------------------

Outcome witness_search() {
  Check chk;
  const RatExpr f = parse("x1*x2 - x2*x1");
  std::string trials;
  for (std::size_t n = 2; n <= 6; ++n) {
    WitnessOptions opt;
    opt.n = n;
    opt.budget = 1000;
    opt.box = 5;
    opt.require_nonzero = true;
    opt.seed = 5;
    try {
      const auto c = find_distinct_eigs(f, opt);
      const Mat v = eval_expr(f, c.x);
      const Poly chi = charpoly(v);
      chk.expect(v == c.value && chi == c.chi, "certificate value/chi at n = " + std::to_string(n));
      chk.expect(poly_gcd(chi, poly_derivative(chi)).degree() == 0 && det(v) != 0,
                 "eigenvalues not distinct and nonzero at n = " + std::to_string(n));
      chk.expect(c.trial_index < 1000, "budget");
      chk.expect(verify_certificate(f, c), "recheck at n = " + std::to_string(n));
      trials += (trials.empty() ? "" : ", ") + std::to_string(c.trial_index + 1);
    } catch (const Error& e) {
      chk.expect(false, "n = " + std::to_string(n) + ": " + e.what());
    }
  }
  std::string glued = "no";
  try {
    const auto ab = sylvester_representation(24, 5, 7);
    chk.expect(ab.a == 2 && ab.b == 2, "representation of 24");
    WitnessOptions opt;
    opt.seed = 5;
    const auto c = glued_witness(f, 24, 5, 7, opt);
    const Mat v = eval_expr(f, c.x);
    const Poly chi = charpoly(v);
    chk.expect(c.n == 24 && chi.degree() == 24, "glued size");
    chk.expect(poly_gcd(chi, poly_derivative(chi)).degree() == 0 && det(v) != 0, "glued eigenvalues");
    chk.expect(verify_certificate(f, c), "glued recheck");
    glued = "yes";
  } catch (const Error& e) {
    chk.expect(false, std::string("glue: ") + e.what());
  }
  return chk.done("samples used for n = 2..6: " + trials + "; n = 24 = 2*5 + 2*7 certified: " + glued);
}

// 6 ------------------------------------------------------------------------

Outcome two_centrality() {
  Check chk;
  const RatExpr f = parse("x1*x2 - x2*x1");
  std::size_t nonzero = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const Mat v = eval_expr(f, sample_tuple(2, 2, 5, SamplingMode::General, 6, t));
    chk.expect(is_scalar_matrix(v * v), "square not scalar");
    nonzero += !is_scalar_matrix(v);
  }
  const auto p = spectral_profile(f, 2, 100, 6);
  chk.expect(p.kind == ProfileKind::TwoPointSpectrum && p.square_scalar, "profile " + to_string(p.kind));
  return chk.done("100 samples, all squares scalar (" + std::to_string(nonzero) + " values nonscalar); profile " +
                  to_string(p.kind));
}

// 7 ------------------------------------------------------------------------

Outcome sylvester() {
  Check chk;
  for (const auto& [p, q] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 3}, {5, 7}, {11, 13}}) {
    const std::size_t lo = (p - 1) * (q - 1);
    for (std::size_t n = lo; n <= lo + 200; ++n) {
      try {
        const auto ab = sylvester_representation(n, p, q);
        chk.expect(ab.a * p + ab.b * q == n, "wrong representation of " + std::to_string(n));
      } catch (const Error&) {
        chk.expect(false, "no representation of " + std::to_string(n));
      }
    }
    const std::size_t frob = p * q - p - q;
    bool failed = false;
    try {
      sylvester_representation(frob, p, q);
    } catch (const Error& e) {
      failed = e.code() == ErrorCode::NotRepresentable;
    }
    chk.expect(failed, "Frobenius number " + std::to_string(frob) + " was represented");
    // Below the range, agreement with brute force.
    for (std::size_t n = 0; n < lo; ++n) {
      bool brute = false;
      for (std::size_t b = 0; b * q <= n; ++b) brute |= (n - b * q) % p == 0;
      bool lib = true;
      try {
        sylvester_representation(n, p, q);
      } catch (const Error&) {
        lib = false;
      }
      chk.expect(brute == lib, "brute force disagrees at " + std::to_string(n));
    }
  }
  return chk.done("(2,3), (5,7), (11,13): all n in [(p-1)(q-1), +200] represented, pq-p-q = 1, 23, 119 rejected");
}

// 8 ------------------------------------------------------------------------

Outcome difference() {
  Check chk;
  DecompTally tally;
  const std::vector<std::string> fs_text{"x1", "x1*x2 - x2*x1", "x1^2 + x1*x2 - x2*x1 - x1 + 2"};
  for (std::size_t k = 0; k < fs_text.size(); ++k) {
    const std::vector<RatExpr> fs{parse(fs_text[k], 2)};
    for (std::uint64_t t = 0; t < 20; ++t) {
      Mat m = random_matrix(4, 5, 800 + k, t);
      m(3, 3) -= trace(m);
      check_decomposition(chk, tally, fs_text[k], [&] { return decompose_difference(fs[0], m, {.seed = t}); }, fs, m,
                          kTol, 2);
    }
  }
  return chk.done("3 functions x 20 traceless 4x4 targets: " + tally.summary());
}

// 9 ------------------------------------------------------------------------

Outcome linear_combinations() {
  Check chk;
  DecompTally two, three;
  const std::vector<std::string> fs_text{"x1^2", "x1^2 + x1*x2 - x2*x1 - x1 + 2"};
  for (std::size_t k = 0; k < fs_text.size(); ++k) {
    const std::vector<RatExpr> fs{parse(fs_text[k], 2)};
    for (std::uint64_t t = 0; t < 20; ++t) {
      Mat m = random_matrix(4, 5, 900 + k, t);
      if (trace(m) == 0) m(0, 0) += 1;
      if (is_scalar_matrix(m)) m(0, 1) += 1;
      check_decomposition(chk, two, fs_text[k] + " two-term",
                          [&] { return decompose_linear_two(fs[0], m, {.seed = t}); }, fs, m, kTol, 2);
      const Mat a = t == 0 ? Mat::identity(4) : (t == 1 ? Mat::scalar(4, -3) : random_matrix(4, 5, 950 + k, t));
      check_decomposition(chk, three, fs_text[k] + " three-term",
                          [&] { return decompose_linear_three(fs[0], a, {.seed = t}); }, fs, a, kTol, 3);
    }
    for (const Mat& s : {Mat::identity(4), Mat::scalar(4, 7)}) {
      ErrorCode code = ErrorCode::InvalidInput;
      try {
        decompose_linear_two(fs[0], s, {});
      } catch (const Error& e) {
        code = e.code();
      }
      chk.expect(code == ErrorCode::ScalarTarget, "scalar two-term request returned " + std::string(to_string(code)));
    }
  }
  return chk.done("two terms: " + two.summary() + "; three terms (incl. I): " + three.summary() +
                  "; scalar two-term requests -> ScalarTarget");
}

// 10 -----------------------------------------------------------------------

Outcome quotients() {
  Check chk;
  DecompTally tally;
  std::size_t exact_det = 0;
  const std::vector<std::string> rs_text{"x1", "x1 + x2^-1"};
  for (std::size_t k = 0; k < rs_text.size(); ++k) {
    const std::vector<RatExpr> fs{parse(rs_text[k], 2)};
    for (std::size_t n : {3u, 4u}) {
      for (std::uint64_t t = 0; t < 20; ++t) {
        Mat m = random_invertible_nonscalar(n, 1000 + 10 * k + n, t);
        const Rational d = det(m);
        for (std::size_t j = 0; j < n; ++j) m(0, j) /= d;
        const std::string label = rs_text[k] + " n=" + std::to_string(n);
        try {
          const AnyDecomposition q = decompose_quotient(fs[0], m, {.seed = t});
          const double r = independent_residual(q, fs, m);
          (is_exact(q) ? tally.exact : tally.floating)++;
          tally.worst = std::max(tally.worst, r);
          chk.expect(r <= kTol && verify(q, fs, kTol).pass, label + " residual " + sci(r));
          if (const auto* e = std::get_if<Decomposition<Rational>>(&q)) {
            const bool one = det(replay_terms(*e, fs, n)) == 1;
            chk.expect(one, label + " det of reconstruction != 1");
            exact_det += one;
          }
        } catch (const Error& e) {
          chk.expect(false, label + " threw " + e.what());
        }
      }
    }
  }
  const RatExpr c = parse("x1*x2*x1^-1*x2^-1");
  std::size_t points = 0;
  for (std::uint64_t t = 0; points < 100 && t < 1000; ++t) {
    const auto x = sample_tuple(2, 2 + t % 3, 5, SamplingMode::General, 1050, t);
    const auto v = try_eval(c, x);
    if (!v) continue;
    chk.expect(det(*v) == 1, "det x1x2x1^-1x2^-1 != 1");
    ++points;
  }
  chk.expect(points == 100, "too few domain points");
  return chk.done("2 functions x {3, 4} x 20 targets: " + tally.summary() + ", det = 1 exactly on " +
                  std::to_string(exact_det) + " exact reconstructions; det(x1x2x1^-1x2^-1) = 1 on " +
                  std::to_string(points) + " points");
}

// 11 -----------------------------------------------------------------------

Outcome products() {
  Check chk;
  DecompTally tally, scalar3;
  const std::vector<RatExpr> fs{parse("x1^2"), parse("x2^2")};
  std::size_t det_checks = 0;
  for (std::size_t n : {3u, 4u}) {
    for (std::uint64_t t = 0; t < 20; ++t) {
      const Mat m = random_invertible_nonscalar(n, 1100 + n, t);
      const std::string label = "GL" + std::to_string(n) + " #" + std::to_string(t);
      try {
        const AnyDecomposition d = decompose_product_two(fs[0], fs[1], m, {.seed = t});
        const double r = independent_residual(d, fs, m);
        (is_exact(d) ? tally.exact : tally.floating)++;
        tally.worst = std::max(tally.worst, r);
        chk.expect(r <= kTol && verify(d, fs, kTol).pass && term_count(d) == 2, label + " residual " + sci(r));
        // det f(X1) det g(X2) = det M
        if (const auto* e = std::get_if<Decomposition<Rational>>(&d)) {
          chk.expect(det(eval_expr(fs[0], e->terms[0].x)) * det(eval_expr(fs[1], e->terms[1].x)) == det(m),
                     label + " det identity");
        } else {
          const auto& z = std::get<Decomposition<Complex>>(d);
          const Complex lhs = det(eval_expr(fs[0], z.terms[0].x)) * det(eval_expr(fs[1], z.terms[1].x));
          const double dm = det(m).get_d();
          chk.expect(std::abs(lhs - dm) <= kTol * std::max(1.0, std::abs(dm)), label + " det identity");
        }
        ++det_checks;
      } catch (const Error& e) {
        chk.expect(false, label + " threw " + e.what());
      }
    }
    for (long s : {1L, 5L, -2L}) {
      const Mat m = Mat::scalar(n, s);
      const std::vector<RatExpr> f3{fs[0], fs[1], fs[0]};
      check_decomposition(chk, scalar3, "scalar " + std::to_string(s) + " three-factor",
                          [&] { return decompose_product_three(f3[0], f3[1], f3[2], m, {.seed = 7}); }, f3, m, kTol,
                          3);
      ErrorCode code = ErrorCode::InvalidInput;
      try {
        decompose_product_two(fs[0], fs[1], m, {});
      } catch (const Error& e) {
        code = e.code();
      }
      chk.expect(code == ErrorCode::ScalarTarget, "scalar two-factor returned " + std::string(to_string(code)));
    }
  }
  return chk.done("40 targets (GL3, GL4) as x1^2 x2^2 values: " + tally.summary() + ", det identity on " +
                  std::to_string(det_checks) + "; scalar targets three-factor: " + scalar3.summary() +
                  ", two-factor -> ScalarTarget");
}

// 12 -----------------------------------------------------------------------

Outcome twelve_factor() {
  Check chk;
  DecompTally tally;
  const std::vector<RatExpr> fs{parse("x1^2")};
  std::size_t most = 0;
  std::vector<Mat> suite;
  for (std::size_t r = 0; r <= 4; ++r)
    for (std::uint64_t t = 0; t < (r == 0 ? 1 : 8); ++t) suite.push_back(random_rank(4, r, 1200 + r, t));
  // Structured targets: nilpotent Jordan blocks, an idempotent, a scalar.
  suite.push_back(Mat{{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}});
  suite.push_back(Mat{{0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}});
  suite.push_back(Mat{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}});
  suite.push_back(Mat::scalar(4, 3));
  std::vector<std::size_t> per_rank(5);
  for (std::size_t k = 0; k < suite.size(); ++k) {
    const Mat& m = suite[k];
    per_rank[rank(m)]++;
    const std::string label = "target " + std::to_string(k) + " (rank " + std::to_string(rank(m)) + ")";
    try {
      const AnyDecomposition d = decompose_product_twelve(fs[0], m, {.seed = k, .n0 = 2});
      const double r = independent_residual(d, fs, m);
      (is_exact(d) ? tally.exact : tally.floating)++;
      tally.worst = std::max(tally.worst, r);
      most = std::max(most, term_count(d));
      chk.expect(r <= kTwelveTol && verify(d, fs, kTwelveTol).pass, label + " residual " + sci(r));
      chk.expect(term_count(d) <= 12, label + " used " + std::to_string(term_count(d)) + " factors");
    } catch (const Error& e) {
      chk.expect(false, label + " threw " + e.what());
    }
  }
  std::size_t singular = 0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const Mat m = t % 2 ? random_rank(5, t % 5, 1250, t) : random_matrix(5, 5, 1251, t);
    singular += det(m) == 0;
    try {
      const auto f = two_diagonalizable_factor(m, {.seed = t});
      chk.expect(f.d1 * f.d2 == m, "5x5 product mismatch");
      // A squarefree polynomial annihilating a matrix certifies diagonalizability.
      for (const auto& [d, mu] : {std::pair{&f.d1, &f.mu1}, std::pair{&f.d2, &f.mu2}}) {
        chk.expect(eval_poly_at(*mu, *d) == Mat(5, 5), "mu does not annihilate");
        chk.expect(poly_gcd(*mu, poly_derivative(*mu)).degree() == 0, "mu not squarefree");
        chk.expect(certify_diagonalizable(*d), "library certificate rejected");
      }
    } catch (const Error& e) {
      chk.expect(false, std::string("5x5: ") + e.what());
    }
  }
  std::string ranks;
  for (std::size_t r = 0; r <= 4; ++r) ranks += (r ? "/" : "") + std::to_string(per_rank[r]);
  return chk.done(std::to_string(suite.size()) + " 4x4 targets (ranks 0/1/2/3/4: " + ranks +
                  ") with N0 = 2: " + tally.summary() + ", at most " + std::to_string(most) +
                  " factors; 50 5x5 two-diagonalizable certificates (" + std::to_string(singular) + " singular)");
}

// 13 -----------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism(const std::string& cli) {
  Check chk;
  const fs::path dir = fs::temp_directory_path() / ("ncwaring_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto target = dir / "m.json";
  const auto unimodular = dir / "u.json";
  const auto traced = dir / "t.json";
  const auto tuple = dir / "x.json";
  std::ofstream(target) << R"({"n": 4, "entries": [[1,2,0,1],[3,-4,1,0],[0,5,3,2],[1,1,1,0]]})";
  std::ofstream(unimodular) << R"({"n": 3, "entries": [["2","1","0"],["1","1","3"],["0","0","1"]]})";
  std::ofstream(traced) << R"({"n": 3, "entries": [[1,2,0],[0,3,1],[4,0,2]]})";
  std::ofstream(tuple) << to_json(sample_tuple(2, 3, 5, SamplingMode::General, 13, 0)).dump();
  const std::vector<std::string> jobs{
      "eval --expr \"(x1*x2^-1*x1 - x2)^-1 - x2^-1\" --tuple " + tuple.string(),
      "eval --pencil --expr \"(x1*x2^-1*x1 - x2)^-1 - x2^-1\" --tuple " + tuple.string(),
      "realize --commutator-inverse --expr \"x1*x2-x2*x1\"",
      "witness --expr \"x1*x2-x2*x1\" --n 5 --seed 3",
      "witness --expr \"x1*x2-x2*x1\" --n 12 --glue 5 7 --seed 3",
      "profile --expr \"x1*x2-x2*x1\" --n 2 --seed 3",
      "decompose --mode difference --expr \"x1*x2-x2*x1\" --seed 9 --target " + target.string(),
      "decompose --mode linear2 --expr \"x1^2\" --seed 9 --target " + traced.string(),
      "decompose --mode linear3 --expr \"x1^2+x1*x2-x2*x1-x1+2\" --seed 9 --target " + target.string(),
      "decompose --mode quotient --expr \"x1+x2^-1\" --seed 9 --target " + unimodular.string(),
      "decompose --mode product2 --expr \"x1^2\" --expr \"x2^2\" --seed 9 --target " + target.string(),
      "decompose --mode product3 --expr \"x1^2\" --expr \"x2^2\" --expr \"x1\" --seed 9 --target " + target.string(),
      "decompose --mode product12 --expr \"x1^2\" --seed 9 --target " + target.string(),
      "decompose --mode product12 --backend float --expr \"x1^2\" --seed 9 --target " + target.string(),
  };
  std::size_t identical = 0;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    std::string outputs[2];
    int codes[2];
    for (int rep = 0; rep < 2; ++rep) {
      const auto out = dir / ("out" + std::to_string(rep) + ".json");
      const auto report = dir / ("report" + std::to_string(rep) + ".txt");
      const std::string cmd = "\"" + cli + "\" " + jobs[k] + " --out \"" + out.string() + "\" >\"" +
                              report.string() + "\" 2>&1";
      const int status = std::system(cmd.c_str());
      codes[rep] = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
      outputs[rep] = slurp(out) + "\n--report--\n" + slurp(report);
      fs::remove(out);
    }
    chk.expect(codes[0] == 0 && codes[1] == 0, "job " + std::to_string(k) + " exit " + std::to_string(codes[0]));
    chk.expect(outputs[0] == outputs[1], "job " + std::to_string(k) + " output differs");
    if (outputs[0] == outputs[1] && codes[0] == 0) {
      const Json j = Json::parse(outputs[0].substr(0, outputs[0].find("\n--report--\n")));
      chk.expect(j.contains("seed"), "job " + std::to_string(k) + " has no seed");
      ++identical;
    }
  }
  fs::remove_all(dir);
  return chk.done(std::to_string(identical) + "/" + std::to_string(jobs.size()) +
                  " CLI jobs byte-identical across two runs (JSON and report), seed recorded");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <ncwaring-cli>\n";
    return 1;
  }
  const std::string cli = argv[1];
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"realization correctness", realization_correctness},
      {"inverse-size law", inverse_size_law},
      {"threshold arithmetic", threshold_arithmetic},
      {"discriminant laws", discriminant_laws},
      {"witness search", witness_search},
      {"2-centrality fixture", two_centrality},
      {"Sylvester representability", sylvester},
      {"difference decomposition", difference},
      {"linear combinations", linear_combinations},
      {"quotient", quotients},
      {"products", products},
      {"twelve-factor", twelve_factor},
      {"determinism", [&] { return determinism(cli); }},
  };
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("uncaught: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all &= o.pass;
    std::printf("%s %2zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
