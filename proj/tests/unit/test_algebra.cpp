#include <gtest/gtest.h>

#include "ealab/error.hpp"
#include "ealab/lie_algebra.hpp"
#include "ealab/rational.hpp"
#include "support.hpp"

using namespace ealab;
using oracle::qv;

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("3/8"), Rational(3, 8));
  EXPECT_EQ(parse_rational("-1/2"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("0.375"), Rational(3, 8));
  EXPECT_EQ(to_string(parse_rational("-6/4")), "-3/2");
  EXPECT_EQ(to_string(parse_rational("4/2")), "2");
}

TEST(Rational, RejectsGarbage) {
  for (const char* bad : {"", "1/0", "x", "1/2/3", "--1", "1e5"}) {
    EXPECT_THROW(parse_rational(bad), Error) << bad;
  }
}

TEST(Rational, ExactInverseAndRank) {
  oracle::RandomRational rr(11);
  for (int t = 0; t < 20; ++t) {
    const QMatrix m = oracle::random_invertible(rr, 4);
    EXPECT_EQ(m * inverse(m), QMatrix::identity(4));
    EXPECT_EQ(rank(m), 4u);
  }
  QMatrix singular{{1, 2}, {2, 4}};
  EXPECT_EQ(rank(singular), 1u);
  EXPECT_THROW(inverse(singular), Error);
}

TEST(LieAlgebra, BuiltinBracketsMatchPresentation) {
  const LieAlgebra sl2 = load_builtin("sl2");
  const QVector e = qv({1, 0, 0}), h = qv({0, 1, 0}), f = qv({0, 0, 1});
  EXPECT_EQ(bracket(sl2, f, e), h);
  EXPECT_EQ(bracket(sl2, h, e), (Rational(-1) * e));
  EXPECT_EQ(bracket(sl2, h, f), f);

  const LieAlgebra sol = load_builtin("sol");
  const QVector e1 = qv({1, 0, 0}), e2 = qv({0, 1, 0}), hs = qv({0, 0, 1});
  EXPECT_EQ(bracket(sol, hs, e1), e1);
  EXPECT_EQ(bracket(sol, hs, e2), (Rational(-1) * e2));
  EXPECT_TRUE(is_zero(bracket(sol, e1, e2)));

  const LieAlgebra euc = load_builtin("euc");
  const QVector f1 = qv({1, 0, 0}), f2 = qv({0, 1, 0}), ee = qv({0, 0, 1});
  EXPECT_EQ(bracket(euc, ee, f1), (Rational(-1) * f2));
  EXPECT_EQ(bracket(euc, ee, f2), f1);
  EXPECT_TRUE(is_zero(bracket(euc, f1, f2)));

  const LieAlgebra prod = load_builtin("sol_euc");
  EXPECT_EQ(prod.dim(), 6u);
  EXPECT_EQ(prod.basis_names(), (std::vector<std::string>{"e1", "e2", "h", "f1", "f2", "e"}));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 3; j < 6; ++j) EXPECT_TRUE(is_zero(bracket(prod, unit_qvector(6, i), unit_qvector(6, j))));
}

TEST(LieAlgebra, JacobiHoldsForBuiltins) {
  for (const auto& name : builtin_names()) EXPECT_EQ(jacobi_residual(load_builtin(name)), 0) << name;
}

TEST(LieAlgebra, JacobiDetectsBrokenTensor) {
  // [b1,b2] = b1, [b2,b3] = b2, [b1,b3] = 0. Cyclic sum on (b1,b2,b3):
  // [b1,b2] + [b2,0] + [b3,b1] = b1, so the residual is 1.
  using E = BracketEntry;
  const LieAlgebra broken = LieAlgebra::from_brackets("broken", {"b1", "b2", "b3"}, {E{0, 1, {{0, 1}}}, E{1, 2, {{1, 1}}}});
  EXPECT_EQ(jacobi_residual(broken), 1);
}

TEST(LieAlgebra, RejectsMalformedInput) {
  using E = BracketEntry;
  EXPECT_THROW(LieAlgebra::from_brackets("x", {"a", "b"}, {E{0, 0, {{1, 1}}}}), Error);
  EXPECT_THROW(LieAlgebra::from_brackets("x", {"a", "b"}, {E{0, 1, {{0, 1}}}, E{1, 0, {{0, 1}}}}), Error);
  EXPECT_THROW(LieAlgebra::from_brackets("x", {"a", "b"}, {E{0, 2, {{0, 1}}}}), Error);
  EXPECT_THROW(LieAlgebra::from_brackets("x", {}, {}), Error);
  EXPECT_THROW(load_builtin("so3"), Error);
}

TEST(LieAlgebra, BracketIsBilinearAndMatchesAdMatrix) {
  oracle::RandomRational rr(1);
  for (const auto& name : builtin_names()) {
    const LieAlgebra alg = load_builtin(name);
    const std::size_t n = alg.dim();
    for (int t = 0; t < 25; ++t) {
      const QVector x = rr.vector(n), y = rr.vector(n), z = rr.vector(n);
      const Rational a = rr.next(), b = rr.next();
      EXPECT_EQ(bracket(alg, a * x + b * y, z), a * bracket(alg, x, z) + b * bracket(alg, y, z));
      EXPECT_EQ(bracket(alg, x, y), Rational(-1) * bracket(alg, y, x));
      EXPECT_EQ(ad_matrix(alg, x) * y, bracket(alg, x, y));
      EXPECT_EQ(bracket(alg, x, y), oracle::bracket(alg, x, y));
    }
  }
}

TEST(LieAlgebra, FloatBracketAgreesWithExact) {
  oracle::RandomRational rr(2);
  const LieAlgebra alg = load_builtin("sol_euc");
  for (int t = 0; t < 20; ++t) {
    const QVector x = rr.vector(6), y = rr.vector(6);
    EXPECT_LT((bracket(alg, to_eigen(x), to_eigen(y)) - to_eigen(bracket(alg, x, y))).norm(), 1e-12);
  }
}

TEST(Killing, Sl2ValuesFromTwoByTwoTraces) {
  // For sl(2) realized as trace-free 2x2 matrices, K(X, Y) = 4 tr(XY).
  const Eigen::Matrix2d e{{0, 1}, {0, 0}}, h{{-0.5, 0}, {0, 0.5}}, f{{0, 0}, {0.5, 0}};
  const std::array<Eigen::Matrix2d, 3> basis{e, h, f};
  const QMatrix k = killing_form(load_builtin("sl2"));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(k(i, j).get_d(), 4 * (basis[i] * basis[j]).trace());
  // <e,f> = <h,h> = 2, all others among e,h,f zero.
  EXPECT_EQ(k(0, 2), 2);
  EXPECT_EQ(k(1, 1), 2);
  EXPECT_EQ(k(0, 0), 0);
  EXPECT_EQ(k(0, 1), 0);
  EXPECT_EQ(k(1, 2), 0);
  EXPECT_EQ(k(2, 2), 0);
}

TEST(Killing, AdInvariant) {
  oracle::RandomRational rr(3);
  for (const auto& name : builtin_names()) {
    const LieAlgebra alg = load_builtin(name);
    const QMatrix k = killing_form(alg);
    for (int t = 0; t < 25; ++t) {
      const QVector x = rr.vector(alg.dim()), y = rr.vector(alg.dim()), z = rr.vector(alg.dim());
      EXPECT_EQ(oracle::form(k, bracket(alg, x, y), z) + oracle::form(k, y, bracket(alg, x, z)), 0) << name;
    }
  }
}

TEST(Killing, SolvableAlgebrasHaveDegenerateKilling) {
  EXPECT_EQ(rank(killing_form(load_builtin("sol"))), 1u);  // only K(h,h) = 2
  EXPECT_EQ(killing_form(load_builtin("sol"))(2, 2), 2);
  EXPECT_EQ(killing_form(load_builtin("euc"))(2, 2), -2);
}
