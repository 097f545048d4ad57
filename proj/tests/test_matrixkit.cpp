#include <gtest/gtest.h>

#include "ncwaring/charpoly.hpp"
#include "ncwaring/factorization.hpp"
#include "ncwaring/rng.hpp"
#include "ncwaring/similarity.hpp"

using namespace ncw;

namespace {

using Mat = Matrix<Rational>;

Mat random_matrix(Rng& rng, std::size_t n, long box = 4) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.uniform_int(-box, box);
  return m;
}

Mat random_invertible(Rng& rng, std::size_t n) {
  Mat m = random_matrix(rng, n);
  while (sgn(det(m)) == 0) m = random_matrix(rng, n);
  return m;
}

UniPoly<Rational> from_roots(std::vector<Rational> r) { return UniPoly<Rational>::from_roots(r); }

std::vector<Rational> Q(std::vector<long> v) { return {v.begin(), v.end()}; }

bool zero_diagonal(const Mat& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (sgn(m(i, i)) != 0) return false;
  return true;
}

}  // namespace

TEST(Basics, DetInverseSolve) {
  EXPECT_EQ(det(Mat::identity(3)), Rational(1));
  const Mat a{{1, 1}, {0, 1}};
  EXPECT_EQ(inverse(a), (Mat{{1, -1}, {0, 1}}));
  Rng rng(1);
  for (int t = 0; t < 5; ++t) {
    Mat m(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) {
        m(i, j) = Rational(rng.uniform_int(-9, 9), rng.uniform_int(1, 5));
        m(i, j).canonicalize();
      }
    if (sgn(det(m)) == 0) continue;
    EXPECT_EQ(m * inverse(m), Mat::identity(6));
    const Mat b = random_matrix(rng, 6);
    EXPECT_EQ(m * mat_solve(m, b), b);
  }
  EXPECT_THROW(inverse(Mat{{1, 2}, {2, 4}}), Error);
  EXPECT_EQ(trace(Mat{{1, 5}, {7, -3}}), Rational(-2));
}

TEST(Basics, FloatInverse) {
  Rng rng(2);
  const Matrix<Complex> m = to_complex(random_invertible(rng, 6));
  EXPECT_LE(max_abs_diff(m * inverse(m), Matrix<Complex>::identity(6)), 1e-10);
}

TEST(Basics, RankNullSpace) {
  const Mat m{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  EXPECT_EQ(rank(m), 2u);
  const Mat k = null_space(m);
  ASSERT_EQ(k.cols(), 1u);
  EXPECT_EQ(m * k, Mat(3, 1));
}

TEST(ZeroDiagonal, DiagonalExample) {
  const Mat m{{1, 0}, {0, -1}};
  const auto s = zero_diagonal_similarity(m);
  EXPECT_TRUE(zero_diagonal(s.reduced));
  EXPECT_EQ(s.q * s.reduced * inverse(s.q), m);
}

TEST(ZeroDiagonal, TrivialCases) {
  const Mat z{{0, 3, 1}, {2, 0, 5}, {1, 1, 0}};
  const auto s = zero_diagonal_similarity(z);
  EXPECT_EQ(s.q, Mat::identity(3));
  EXPECT_EQ(s.reduced, z);
  const auto s0 = zero_diagonal_similarity(Mat(3, 3));
  EXPECT_EQ(s0.q, Mat::identity(3));
  EXPECT_EQ(s0.reduced, Mat(3, 3));
  EXPECT_THROW(zero_diagonal_similarity(Mat::identity(2)), Error);
}

TEST(ZeroDiagonal, RandomTraceless) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + t % 5;
    Mat m = random_matrix(rng, n);
    m(n - 1, n - 1) -= trace(m);
    const auto s = zero_diagonal_similarity(m);
    EXPECT_TRUE(zero_diagonal(s.reduced));
    EXPECT_EQ(s.q * s.reduced * inverse(s.q), m);
  }
}

TEST(PrescribedDiagonal, Examples) {
  const Mat a{{3, 0}, {0, 1}};
  const std::vector<Rational> d = Q({2, 2});
  const auto s = prescribed_diagonal_similarity<Rational>(a, d);
  EXPECT_EQ(s.reduced.diagonal_entries(), d);
  EXPECT_EQ(s.q * s.reduced * inverse(s.q), a);

  const Mat b{{1, 2}, {3, 4}};
  const std::vector<Rational> same = Q({1, 4});
  const auto t = prescribed_diagonal_similarity<Rational>(b, same);
  EXPECT_EQ(t.q, Mat::identity(2));
  EXPECT_EQ(t.reduced, b);

  const std::vector<Rational> two = Q({2, 0});
  try {
    prescribed_diagonal_similarity<Rational>(Mat::identity(2), two);
    ADD_FAILURE() << "scalar input accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ScalarInput);
  }
  const std::vector<Rational> wrong = Q({1, 1});
  EXPECT_THROW(prescribed_diagonal_similarity<Rational>(b, wrong), Error);
}

TEST(PrescribedDiagonal, RandomNonscalar) {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + t % 4;
    const Mat a = random_matrix(rng, n);
    if (is_scalar_matrix(a)) continue;
    std::vector<Rational> d;
    Rational sum = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      d.emplace_back(rng.uniform_int(-5, 5));
      sum += d.back();
    }
    d.push_back(trace(a) - sum);
    const auto s = prescribed_diagonal_similarity<Rational>(a, d);
    EXPECT_EQ(s.reduced.diagonal_entries(), d);
    EXPECT_EQ(s.q * s.reduced * inverse(s.q), a);
  }
}

TEST(TriangularSplit, Examples) {
  const std::vector<Rational> l = Q({1, 2});
  const auto s = triangular_split<Rational>(Mat{{0, 1}, {1, 0}}, l);
  EXPECT_EQ(s.upper, (Mat{{1, 1}, {0, 2}}));
  EXPECT_EQ(s.lower, (Mat{{1, 0}, {-1, 2}}));
  const auto z = triangular_split<Rational>(Mat(2, 2), l);
  EXPECT_EQ(z.upper, Mat::diagonal(l));
  EXPECT_EQ(z.lower, Mat::diagonal(l));
  const std::vector<Rational> rep = Q({1, 1});
  EXPECT_THROW(triangular_split<Rational>(Mat{{0, 1}, {1, 0}}, rep), Error);
  EXPECT_THROW(triangular_split<Rational>(Mat::identity(2), l), Error);
}

TEST(TriangularSplit, RandomZeroDiagonal) {
  Rng rng(5);
  const std::vector<Rational> l = Q({-2, 1, 3, 4, 7});
  for (int t = 0; t < 10; ++t) {
    Mat m0 = random_matrix(rng, 5);
    for (std::size_t i = 0; i < 5; ++i) m0(i, i) = 0;
    const auto s = triangular_split<Rational>(m0, l);
    EXPECT_EQ(s.upper - s.lower, m0);
    EXPECT_EQ(charpoly(s.upper), from_roots(l));
    EXPECT_EQ(charpoly(s.lower), from_roots(l));
  }
}

TEST(Diagonalize, Examples) {
  const Mat d = Mat::diagonal(Q({3, -1, 2}));
  const auto e = diagonalize_distinct(d);
  EXPECT_EQ(e.vectors, Mat::identity(3));
  EXPECT_EQ(e.values, Q({3, -1, 2}));

  // [[1,1],[0,2]]: (A - 2I) v = 0 gives v = (1, 1); (A - I) v = 0 gives v = (1, 0).
  const Mat a{{1, 1}, {0, 2}};
  const auto f = diagonalize_distinct(a);
  EXPECT_EQ(f.values, Q({1, 2}));
  EXPECT_EQ(a * f.vectors, f.vectors * Mat::diagonal(f.values));
  EXPECT_EQ(f.vectors(1, 0), Rational(0));
  EXPECT_EQ(f.vectors(0, 1), f.vectors(1, 1));
  EXPECT_THROW(diagonalize_distinct(Mat{{1, 1}, {0, 1}}), Error);
}

TEST(Diagonalize, RandomFloat) {
  Rng rng(6);
  for (int t = 0; t < 5; ++t) {
    const Matrix<Complex> m = to_complex(random_matrix(rng, 6));
    const auto e = diagonalize_distinct(m);
    const Matrix<Complex> lhs = m * e.vectors;
    const Matrix<Complex> rhs = e.vectors * Matrix<Complex>::diagonal(e.values);
    EXPECT_LE(max_abs_diff(lhs, rhs), 1e-9 * std::max(1.0, m.max_abs()));
  }
}

TEST(Sourour, TwoByTwoExample) {
  const Mat m{{1, 1}, {0, 1}};
  const std::vector<Rational> beta{2, 3};
  const std::vector<Rational> gamma{Rational(1, 2), Rational(1, 3)};
  const auto f = sourour_factor<Rational>(m, beta, gamma);
  EXPECT_EQ(f.first * f.second, m);
  EXPECT_EQ(charpoly(f.first), from_roots(beta));
  EXPECT_EQ(charpoly(f.second), from_roots(gamma));
}

TEST(Sourour, RecoversPrebuiltProduct) {
  const Mat n1{{2, 1, 0}, {0, -1, 4}, {0, 0, 3}};
  const Mat n2{{1, 0, 0}, {2, 5, 0}, {-1, 1, -2}};
  const Mat m = n1 * n2;
  const std::vector<Rational> beta = Q({2, -1, 3});
  const std::vector<Rational> gamma = Q({1, 5, -2});
  const auto f = sourour_factor<Rational>(m, beta, gamma, 7);
  EXPECT_EQ(f.first * f.second, m);
  EXPECT_EQ(charpoly(f.first), from_roots(beta));
  EXPECT_EQ(charpoly(f.second), from_roots(gamma));
}

TEST(Sourour, Errors) {
  const Mat m{{2, 1}, {0, 1}};
  const std::vector<Rational> ones = Q({1, 1});
  EXPECT_THROW(sourour_factor<Rational>(m, ones, ones), Error);
  try {
    sourour_factor<Rational>(m, ones, ones);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DeterminantMismatch);
  }
  const std::vector<Rational> b = Q({2, 1});
  EXPECT_THROW(sourour_factor<Rational>(Mat::scalar(2, 2), b, ones), Error);
  const std::vector<Rational> z = Q({0, 1});
  EXPECT_THROW(sourour_factor<Rational>(m, b, z), Error);
}

TEST(Sourour, RandomRepeatedPrescriptions) {
  Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 3 + t % 3;
    Mat m = random_invertible(rng, n);
    if (is_scalar_matrix(m)) continue;
    std::vector<Rational> beta(n, Rational(1));
    std::vector<Rational> gamma(n, Rational(1));
    gamma.back() = det(m);
    const auto f = sourour_factor<Rational>(m, beta, gamma, t);
    EXPECT_EQ(f.first * f.second, m);
    EXPECT_EQ(charpoly(f.first), from_roots(beta));
    EXPECT_EQ(charpoly(f.second), from_roots(gamma));
  }
}

TEST(Sourour, FloatBackend) {
  Rng rng(9);
  const Mat m = random_invertible(rng, 4);
  const Rational d = det(m);
  const std::vector<Complex> beta{{1, 0}, {2, 0}, {3, 0}, {4, 0}};
  const std::vector<Complex> gamma{{1, 0}, {-1, 0}, {0.5, 0}, {-d.get_d() / 12.0, 0}};
  const auto f = sourour_factor<Complex>(to_complex(m), beta, gamma);
  EXPECT_LE(max_abs_diff(f.first * f.second, to_complex(m)), 1e-8 * m.max_abs());
}

TEST(Diagonalizable, ShiftOracle) {
  // P: e_i -> e_{i-1} cyclically; P diag(0,1,1) = S.
  const Mat s{{0, 1, 0}, {0, 0, 1}, {0, 0, 0}};
  const Mat p{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
  const Mat d = Mat::diagonal(Q({0, 1, 1}));
  EXPECT_EQ(p * d, s);
  EXPECT_TRUE(certify_diagonalizable(p));
  EXPECT_TRUE(certify_diagonalizable(d));
  EXPECT_FALSE(certify_diagonalizable(s));
  const auto f = two_diagonalizable_factor(s);
  EXPECT_EQ(f.d1 * f.d2, s);
  EXPECT_TRUE(is_squarefree(f.mu1));
  EXPECT_TRUE(is_squarefree(f.mu2));
  EXPECT_EQ(eval_poly_at(f.mu1, f.d1), Mat(3, 3));
  EXPECT_EQ(eval_poly_at(f.mu2, f.d2), Mat(3, 3));
}

TEST(Diagonalizable, SquarefreeCharpolyIsKept) {
  const Mat m{{1, 2}, {3, 4}};
  const auto f = two_diagonalizable_factor(m);
  EXPECT_EQ(f.d1, m);
  EXPECT_EQ(f.d2, Mat::identity(2));
}

TEST(Diagonalizable, RandomSingularFiveByFive) {
  Rng rng(10);
  for (int t = 0; t < 10; ++t) {
    Mat m = random_matrix(rng, 5, 3);
    // force rank <= 3 by copying rows
    m.set_block(3, 0, m.block(0, 0, 1, 5) * Rational(2) - m.block(1, 0, 1, 5));
    if (t % 2 == 0) m.set_block(4, 0, m.block(2, 0, 1, 5));
    const auto f = two_diagonalizable_factor(m, {t % 3 == 0, static_cast<std::uint64_t>(t)});
    EXPECT_EQ(f.d1 * f.d2, m);
    UniPoly<Rational> mu1;
    UniPoly<Rational> mu2;
    EXPECT_TRUE(certify_diagonalizable(f.d1, &mu1));
    EXPECT_TRUE(certify_diagonalizable(f.d2, &mu2));
    EXPECT_TRUE(is_squarefree(mu1) && is_squarefree(mu2));
    if (t % 3 == 0) {
      EXPECT_TRUE(exact_spectrum(f.d1).has_value());
      EXPECT_TRUE(exact_spectrum(f.d2).has_value());
    }
  }
}

TEST(MinimalPolynomial, JordanAndDiagonal) {
  const Mat j{{2, 1, 0}, {0, 2, 0}, {0, 0, 3}};
  // (t - 2)^2 (t - 3)
  EXPECT_EQ(minimal_polynomial(j), from_roots(Q({2, 2, 3})));
  EXPECT_EQ(minimal_polynomial(Mat::diagonal(Q({1, 1, 4}))), from_roots(Q({1, 4})));
  EXPECT_FALSE(certify_diagonalizable(j));
  const auto spec = exact_spectrum(j);
  ASSERT_TRUE(spec.has_value());
  EXPECT_EQ(*spec, Q({2, 2, 3}));
  EXPECT_FALSE(exact_spectrum(Mat{{0, 2}, {1, 0}}).has_value());
}

TEST(Sylvester, Examples) {
  const auto r = sylvester_representation(24, 5, 7);
  EXPECT_EQ(r.a, 2u);
  EXPECT_EQ(r.b, 2u);
  EXPECT_THROW(sylvester_representation(23, 5, 7), Error);
  const auto s = sylvester_representation(10, 5, 7);
  EXPECT_EQ(s.a, 2u);
  EXPECT_EQ(s.b, 0u);
}

TEST(Sylvester, NeverFailsAboveConductor) {
  for (auto [p, q] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 3}, {5, 7}, {11, 13}}) {
    for (std::size_t n = (p - 1) * (q - 1); n <= (p - 1) * (q - 1) + 200; ++n) {
      const auto r = sylvester_representation(n, p, q);
      EXPECT_EQ(r.a * p + r.b * q, n);
    }
    EXPECT_THROW(sylvester_representation(p * q - p - q, p, q), Error);
  }
}
