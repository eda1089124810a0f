#include <gtest/gtest.h>

#include <complex>

#include <Eigen/Eigenvalues>

#include "ealab/error.hpp"
#include "ealab/lattice.hpp"

using namespace ealab;

namespace {

using Complex = std::complex<double>;

std::vector<Complex> roots(const ReciprocalQuartic& q) {
  Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
  c(1, 0) = c(2, 1) = c(3, 2) = 1;
  c(0, 3) = -1;
  c(1, 3) = -static_cast<double>(q.a);
  c(2, 3) = -static_cast<double>(q.b);
  c(3, 3) = -static_cast<double>(q.a);
  Eigen::EigenSolver<Eigen::Matrix4d> es(c);
  std::vector<Complex> out;
  for (int i = 0; i < 4; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

bool near_integer(double x) { return std::abs(x - std::round(x)) < 1e-7; }

/// Reducible over Q iff some root is rational (here +-1) or some pair of roots
/// gives a monic quadratic with integer coefficients (Gauss's lemma).
bool oracle_irreducible(const ReciprocalQuartic& q) {
  const auto r = roots(q);
  for (const auto& z : r)
    if (std::abs(z.imag()) < 1e-7 && near_integer(z.real()) && std::abs(std::abs(z.real()) - 1) < 1e-7) return false;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const Complex s = r[i] + r[j], p = r[i] * r[j];
      if (std::abs(s.imag()) < 1e-7 && std::abs(p.imag()) < 1e-7 && near_integer(s.real()) && near_integer(p.real()))
        return false;
    }
  return true;
}

/// One positive real pair off the unit circle, one non-real pair on it, irreducible.
bool oracle_accepted(const ReciprocalQuartic& q) {
  int off = 0, on = 0;
  for (const auto& z : roots(q)) {
    const double m = std::abs(z);
    if (std::abs(z.imag()) < 1e-9 && z.real() > 0 && std::abs(m - 1) > 1e-6) ++off;
    if (std::abs(z.imag()) > 1e-9 && std::abs(m - 1) < 1e-6) ++on;
  }
  return off == 2 && on == 2 && oracle_irreducible(q);
}

}  // namespace

TEST(Lattice, AcceptanceAgreesWithNumericRoots) {
  for (std::int64_t a = -10; a <= 10; ++a)
    for (std::int64_t b = -10; b <= 10; ++b) {
      const ReciprocalQuartic q{a, b};
      EXPECT_EQ(classify_quartic(q) == QuarticStatus::Accepted, oracle_accepted(q)) << a << "," << b;
      EXPECT_EQ(is_irreducible(q), oracle_irreducible(q)) << a << "," << b;
    }
}

TEST(Lattice, RejectionReasonsReproduce) {
  // Resolvent y^2 + a y + (b - 2); roots y1 >= y2 when real.
  for (std::int64_t a = -10; a <= 10; ++a)
    for (std::int64_t b = -10; b <= 10; ++b) {
      const ReciprocalQuartic q{a, b};
      const double disc = static_cast<double>(a * a - 4 * (b - 2));
      const QuarticStatus s = classify_quartic(q);
      if (disc < 0) {
        EXPECT_EQ(s, QuarticStatus::ComplexResolvent) << a << "," << b;
        continue;
      }
      const double y1 = (-a + std::sqrt(disc)) / 2, y2 = (-a - std::sqrt(disc)) / 2;
      const bool hyperbolic = y1 > 2;  // positive pair lambda, 1/lambda
      const bool elliptic = std::abs(y2) < 2;
      if (s == QuarticStatus::NoHyperbolicRoot) {
        EXPECT_FALSE(hyperbolic) << a << "," << b;
      }
      if (s == QuarticStatus::NoEllipticRoot) {
        EXPECT_TRUE(hyperbolic && !elliptic) << a << "," << b;
      }
      if (s == QuarticStatus::Reducible) {
        EXPECT_FALSE(is_irreducible(q));
      }
      if (s == QuarticStatus::Accepted) {
        EXPECT_TRUE(hyperbolic && elliptic && is_irreducible(q));
      }
    }
}

TEST(Lattice, KnownExamples) {
  EXPECT_EQ(classify_quartic({-3, 3}), QuarticStatus::Accepted);
  EXPECT_EQ(classify_quartic({0, 0}), QuarticStatus::NoHyperbolicRoot);   // x^4 + 1, resolvent roots +-sqrt(2)
  EXPECT_EQ(classify_quartic({0, -2}), QuarticStatus::NoHyperbolicRoot);  // (x^2 - 1)^2
  EXPECT_EQ(classify_quartic({0, 4}), QuarticStatus::ComplexResolvent);   // y^2 + 2
  EXPECT_EQ(classify_quartic({-7, 14}), QuarticStatus::NoEllipticRoot);   // resolvent roots 4 and 3
  EXPECT_EQ(classify_quartic({-2, -1}), QuarticStatus::Reducible);        // (x^2 - 3x + 1)(x^2 + x + 1)
  EXPECT_FALSE(is_irreducible({-2, 2}));                                  // (x - 1)^2 (x^2 + 1)
  EXPECT_FALSE(is_irreducible({0, -2}));
  EXPECT_TRUE(is_irreducible({-3, 3}));
}

TEST(Lattice, EnumerationBoundTen) {
  const auto c = enumerate_candidates(10);
  EXPECT_FALSE(c.empty());
  EXPECT_NE(std::find(c.begin(), c.end(), ReciprocalQuartic{-3, 3}), c.end());
  EXPECT_TRUE(std::is_sorted(c.begin(), c.end(), [](const auto& x, const auto& y) {
    return std::pair(x.a, x.b) < std::pair(y.a, y.b);
  }));
  std::size_t expected = 0;
  for (std::int64_t a = -10; a <= 10; ++a)
    for (std::int64_t b = -10; b <= 10; ++b) expected += oracle_accepted({a, b});
  EXPECT_EQ(c.size(), expected);
  EXPECT_THROW(enumerate_candidates(0), Error);
}

TEST(Lattice, CertificatesForAllCandidates) {
  for (const auto& q : enumerate_candidates(10)) {
    const LoxodromicCertificate cert = certify(q);
    EXPECT_EQ(cert.companion_det, 1);
    EXPECT_EQ(determinant(cert.companion), 1);
    EXPECT_LT(cert.residual, 1e-10);
    EXPECT_GT(cert.lambda, 1.0);
    EXPECT_GT(cert.alpha, 0.0);
    EXPECT_LT(cert.alpha, M_PI);
    EXPECT_NEAR(q(cert.lambda), 0.0, 1e-9 * std::pow(cert.lambda, 4));

    // Moduli: lambda * (1/lambda) = 1 and the rotation pair sits on the unit circle.
    std::vector<double> mods;
    for (const auto& z : roots(q)) mods.push_back(std::abs(z));
    std::sort(mods.begin(), mods.end());
    EXPECT_NEAR(mods[0] * mods[3], 1.0, 1e-10);
    EXPECT_NEAR(mods[1], 1.0, 1e-10);
    EXPECT_NEAR(mods[2], 1.0, 1e-10);

    const Eigen::Matrix4d c = [&] {
      Eigen::Matrix4d m;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = static_cast<double>(cert.companion[i][j]);
      return m;
    }();
    EXPECT_LT((cert.s_inv * c * cert.s - block_form(cert.lambda, cert.alpha)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((cert.s * cert.s_inv - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-10);

    const LatticeData lat = build_gamma(cert);
    EXPECT_LT(lat.residual, 1e-9);
    EXPECT_EQ(lat.phi, block_form(cert.lambda, cert.alpha));
    EXPECT_LT((lat.phi * lat.gamma0 - lat.gamma0 * c).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Lattice, MinusThreeThree) {
  const LoxodromicCertificate cert = certify({-3, 3});
  EXPECT_NEAR(cert.lambda, 2.15372, 1e-5);
  EXPECT_NEAR(cert.alpha, 1.37863, 1e-5);
  const IntMatrix4 expected{{{0, 0, 0, -1}, {1, 0, 0, 3}, {0, 1, 0, -3}, {0, 0, 1, 3}}};
  EXPECT_EQ(cert.companion, expected);
}

TEST(Lattice, RejectedQuarticsThrow) {
  EXPECT_THROW(certify({0, 0}), Error);
  EXPECT_THROW(certify({0, -2}), Error);
}
