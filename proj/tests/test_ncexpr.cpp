#include <gtest/gtest.h>

#include "ncwaring/ncpoly.hpp"
#include "ncwaring/rng.hpp"
#include "ncwaring/witness.hpp"

using namespace ncw;

namespace {

using Mat = Matrix<Rational>;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidInput;
}

std::optional<Mat> try_eval(const RatExpr& e, const MatrixTuple<Rational>& x) {
  try {
    return eval_expr(e, x);
  } catch (const Error& err) {
    if (err.code() == ErrorCode::DomainError) return std::nullopt;
    throw;
  }
}

Mat unit(std::size_t n, std::size_t i, std::size_t j) {
  Mat m(n, n);
  m(i, j) = 1;
  return m;
}

}  // namespace

TEST(Parse, MixedDegreePolynomial) {
  const RatExpr e = parse("x1^2 + x1*x2 - x2*x1 - x1 + 2");
  EXPECT_EQ(e.variables(), 2u);
  EXPECT_FALSE(e.has_inverse());
  const NcPolynomial p = expr_to_poly(e);
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(p.coefficient({1, 1}), Rational(1));
  EXPECT_EQ(p.coefficient({1, 2}), Rational(1));
  EXPECT_EQ(p.coefficient({2, 1}), Rational(-1));
  EXPECT_EQ(p.coefficient({1}), Rational(-1));
  EXPECT_EQ(p.constant_term(), Rational(2));
  EXPECT_EQ(p.terms().size(), 5u);
}

TEST(Parse, NestedRationalExpression) {
  const RatExpr e = parse("(x1*x2^-1*x1 - x2)^-1 - x2^-1");
  EXPECT_TRUE(e.has_inverse());
  EXPECT_EQ(e.variables(), 2u);
  EXPECT_EQ(code_of([&] { expr_to_poly(e); }), ErrorCode::NotPolynomial);
}

TEST(Parse, Errors) {
  EXPECT_EQ(code_of([] { parse("x1*"); }), ErrorCode::SyntaxError);
  EXPECT_EQ(code_of([] { parse("(x1"); }), ErrorCode::SyntaxError);
  EXPECT_EQ(code_of([] { parse("x1^-2"); }), ErrorCode::SyntaxError);
  EXPECT_EQ(code_of([] { parse("x1^0"); }), ErrorCode::SyntaxError);
  EXPECT_EQ(code_of([] { parse("x3", 2); }), ErrorCode::UnknownVariable);
  EXPECT_EQ(code_of([] { parse("x0"); }), ErrorCode::UnknownVariable);
  try {
    parse("x1 + * x2");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("position"), std::string::npos) << e.what();
  }
}

TEST(Parse, PrecedenceAndLiterals) {
  const Mat a{{1, 2}, {3, 4}};
  const MatrixTuple<Rational> x{{a}};
  EXPECT_EQ(eval_expr(parse("-x1^2"), x), -(a * a));
  EXPECT_EQ(eval_expr(parse("x1^3"), x), a * a * a);
  EXPECT_EQ(eval_expr(parse("3/2*x1 - 0.5"), x), a * Rational(3, 2) - Mat::scalar(2, Rational(1, 2)));
  EXPECT_EQ(eval_expr(parse("x1^-1"), x), inverse(a));
  EXPECT_EQ(eval_expr(parse("((x1)^-1)^-1"), x), a);
}

TEST(Eval, CommutatorOfMatrixUnits) {
  const RatExpr e = parse("x1*x2 - x2*x1");
  const MatrixTuple<Rational> x{{unit(2, 0, 1), unit(2, 1, 0)}};
  EXPECT_EQ(eval_expr(e, x), (Mat{{1, 0}, {0, -1}}));
}

TEST(Eval, SingularInverseIsDomainError) {
  const MatrixTuple<Rational> x{{Mat{{1, 2}, {2, 4}}}};
  EXPECT_EQ(code_of([&] { eval_expr(parse("x1^-1"), x); }), ErrorCode::DomainError);
}

TEST(Eval, EquivalentRepresentativesAgree) {
  // x1^-1 x2^-1 - 1 = x1^-1 (1 - x1 x2) x2^-1, so its inverse is x2 (1 - x1 x2)^-1 x1.
  const RatExpr lhs = parse("x2*(1-x1*x2)^-1*x1");
  const RatExpr rhs = parse("(x1^-1*x2^-1-1)^-1");
  std::size_t compared = 0;
  for (std::uint64_t t = 0; compared < 100; ++t) {
    const auto x = sample_tuple(2, 3, 4, SamplingMode::General, 42, t);
    const auto a = try_eval(lhs, x);
    const auto b = try_eval(rhs, x);
    if (!a || !b) continue;
    EXPECT_EQ(*a, *b);
    ++compared;
  }
}

TEST(Eval, PrintedPairDiffersAlreadyOnScalars) {
  // x2 (1 - x1 x2)^-1 x2 at (2, 3) is 9 / (1 - 6) = -9/5, while
  // (x1^-1 x2^-1 - 1)^-1 = x1 x2 / (1 - x1 x2) = -6/5.
  const MatrixTuple<Rational> x{{Mat{{2}}, Mat{{3}}}};
  EXPECT_EQ(eval_expr(parse("x2*(1-x1*x2)^-1*x2"), x), (Mat{{Rational(-9, 5)}}));
  EXPECT_EQ(eval_expr(parse("(x1^-1*x2^-1-1)^-1"), x), (Mat{{Rational(-6, 5)}}));
}

TEST(Eval, ConjugationEquivariance) {
  const std::vector<std::string> corpus{"x1*x2 - x2*x1", "x1^2 + x1*x2 - x2*x1 - x1 + 2",
                                        "(x1*x2^-1*x1 - x2)^-1 - x2^-1", "x1^-1 + 3*x2"};
  Rng rng(3);
  for (const auto& text : corpus) {
    const RatExpr e = parse(text, 2);
    for (std::uint64_t t = 0; t < 10; ++t) {
      const auto x = sample_tuple(2, 3, 5, SamplingMode::General, 7, t);
      const auto p = sample_tuple(1, 3, 3, SamplingMode::General, 8, t).blocks[0];
      if (sgn(det(p)) == 0) continue;
      const Mat p_inv = inverse(p);
      const auto v = try_eval(e, x);
      const auto w = try_eval(e, conjugate(x, p, p_inv));
      if (!v || !w) continue;
      EXPECT_EQ(*w, p * *v * p_inv) << text;
    }
  }
}

TEST(Eval, DirectSumMultiplicativity) {
  const RatExpr e = parse("(x1*x2^-1*x1 - x2)^-1 - x2^-1");
  for (std::uint64_t t = 0; t < 10; ++t) {
    const auto x = sample_tuple(2, 2, 5, SamplingMode::General, 9, t);
    const auto y = sample_tuple(2, 3, 5, SamplingMode::General, 10, t);
    const auto a = try_eval(e, x);
    const auto b = try_eval(e, y);
    if (!a || !b) continue;
    EXPECT_EQ(eval_expr(e, direct_sum(x, y)), direct_sum(*a, *b));
  }
}

TEST(Eval, ComplexBackendMatchesExact) {
  const RatExpr e = parse("(x1*x2^-1*x1 - x2)^-1 - x2^-1");
  const auto x = sample_tuple(2, 3, 5, SamplingMode::General, 11, 0);
  const auto exact = try_eval(e, x);
  ASSERT_TRUE(exact);
  EXPECT_LE(max_abs_diff(eval_expr(e, to_complex(x)), to_complex(*exact)), 1e-10 * std::max(1.0, exact->max_abs()));
}

TEST(Poly, ExpansionExamples) {
  const NcPolynomial c = expr_to_poly(parse("x1*x2 - x2*x1"));
  EXPECT_EQ(c.terms().size(), 2u);
  EXPECT_EQ(c.coefficient({1, 2}), Rational(1));
  EXPECT_EQ(c.coefficient({2, 1}), Rational(-1));
  EXPECT_EQ(c.degree(), 2);
  const NcPolynomial k = expr_to_poly(parse("2"));
  EXPECT_EQ(k.degree(), 0);
  EXPECT_EQ(k.constant_term(), Rational(2));
  // (x1 + x2)(x1 - x2) = x1x1 - x1x2 + x2x1 - x2x2
  const NcPolynomial d = expr_to_poly(parse("(x1+x2)*(x1-x2)"));
  EXPECT_EQ(d.terms().size(), 4u);
  EXPECT_EQ(d.coefficient({1, 1}), Rational(1));
  EXPECT_EQ(d.coefficient({1, 2}), Rational(-1));
  EXPECT_EQ(d.coefficient({2, 1}), Rational(1));
  EXPECT_EQ(d.coefficient({2, 2}), Rational(-1));
  EXPECT_TRUE(expr_to_poly(parse("x1 - x1")).is_zero());
  EXPECT_EQ(expr_to_poly(parse("2^-1*x1")).coefficient({1}), Rational(1, 2));
}

TEST(Poly, RoundTripEvaluation) {
  const std::vector<std::string> corpus{"x1^2 + x1*x2 - x2*x1 - x1 + 2", "(x1+x2)*(x1-x2)^2", "x2*x1*x2 - 3"};
  for (const auto& text : corpus) {
    const RatExpr e = parse(text, 2);
    const NcPolynomial p = expr_to_poly(e);
    for (std::uint64_t t = 0; t < 10; ++t) {
      const auto x = sample_tuple(2, 3, 5, SamplingMode::General, 12, t);
      EXPECT_EQ(p.evaluate(x), eval_expr(e, x)) << text;
    }
  }
}

TEST(Poly, ScalarRoots) {
  const auto z = scalar_root(expr_to_poly(parse("x1*x2 - x2*x1 + x1^2", 2)));
  ASSERT_TRUE(z);
  EXPECT_EQ(*z, (std::vector<Rational>{0, 0}));
  const auto two = scalar_root(expr_to_poly(parse("x1 - 2")));
  ASSERT_TRUE(two);
  EXPECT_EQ(*two, std::vector<Rational>{2});
  const NcPolynomial f = expr_to_poly(parse("x1*x2 - 1"));
  const auto r = scalar_root(f);
  ASSERT_TRUE(r);
  EXPECT_EQ(f.eval_scalar(*r), Rational(0));
  EXPECT_FALSE(scalar_root(expr_to_poly(parse("x1*x2 - x2*x1 + 1"))).has_value());
}
