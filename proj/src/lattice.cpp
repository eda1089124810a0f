#include "ealab/lattice.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "ealab/error.hpp"

namespace ealab {

const char* to_string(QuarticStatus s) {
  switch (s) {
    case QuarticStatus::Accepted: return "Accepted";
    case QuarticStatus::ComplexResolvent: return "ComplexResolvent";
    case QuarticStatus::NoHyperbolicRoot: return "NoHyperbolicRoot";
    case QuarticStatus::NoEllipticRoot: return "NoEllipticRoot";
    case QuarticStatus::Reducible: return "Reducible";
  }
  return "Unknown";
}

bool is_irreducible(const ReciprocalQuartic& q) {
  const std::int64_t a = q.a, b = q.b;
  // Rational roots of a monic integer polynomial with constant term 1 are +-1.
  if (2 + 2 * a + b == 0 || 2 - 2 * a + b == 0) return false;
  // (x^2 + p x + r)(x^2 + s x + t) with r t = 1 forces r = t = 1 (p + s = a, p s = b - 2)
  // or r = t = -1 (p + s = a = -(p + s), p s = b + 2).
  const std::int64_t limit = std::abs(a) + std::abs(b) + 4;
  for (std::int64_t p = -limit; p <= limit; ++p) {
    const std::int64_t s = a - p;
    if (p * s == b - 2) return false;
    if (a == 0 && p * s == b + 2) return false;
  }
  return true;
}

QuarticStatus classify_quartic(const ReciprocalQuartic& q) {
  const std::int64_t a = q.a, b = q.b;
  const std::int64_t disc = a * a - 4 * (b - 2);
  if (disc < 0) return QuarticStatus::ComplexResolvent;
  // Resolvent roots y = (-a +- sqrt(disc)) / 2, compared with +-2 by squaring.
  const std::int64_t up = a + 4;    // y1 > 2  <=>  sqrt(disc) > a + 4
  const std::int64_t down = 4 - a;  // y2 > -2 <=>  sqrt(disc) < 4 - a
  const bool y1_above = up < 0 || disc > up * up;
  const bool y2_below = -up < 0 || disc > up * up;  // y2 < 2 <=> sqrt(disc) > -(a + 4)
  const bool y2_above = down > 0 && disc < down * down;
  if (!y1_above) return QuarticStatus::NoHyperbolicRoot;
  if (!(y2_below && y2_above)) return QuarticStatus::NoEllipticRoot;
  if (!is_irreducible(q)) return QuarticStatus::Reducible;
  return QuarticStatus::Accepted;
}

std::vector<ReciprocalQuartic> enumerate_candidates(std::int64_t bound) {
  if (bound < 1) throw Error(ErrorKind::InvalidInput, "bound must be at least 1");
  std::vector<ReciprocalQuartic> out;
  for (std::int64_t a = -bound; a <= bound; ++a)
    for (std::int64_t b = -bound; b <= bound; ++b) {
      ReciprocalQuartic q{a, b};
      if (classify_quartic(q) == QuarticStatus::Accepted) out.push_back(q);
    }
  return out;
}

IntMatrix4 companion_matrix(const ReciprocalQuartic& q) {
  IntMatrix4 c{};
  const auto coeffs = q.coefficients();  // 1, a, b, a, 1
  for (int i = 1; i < 4; ++i) c[i][i - 1] = 1;
  for (int i = 0; i < 4; ++i) c[i][3] = -coeffs[4 - i];
  return c;
}

std::int64_t determinant(const IntMatrix4& m) {
  // Cofactor expansion; entries are small, so int64 is exact.
  auto det3 = [&](int skip_row, int skip_col) {
    std::array<std::array<std::int64_t, 3>, 3> s{};
    for (int i = 0, si = 0; i < 4; ++i) {
      if (i == skip_row) continue;
      for (int j = 0, sj = 0; j < 4; ++j) {
        if (j == skip_col) continue;
        s[si][sj++] = m[i][j];
      }
      ++si;
    }
    return s[0][0] * (s[1][1] * s[2][2] - s[1][2] * s[2][1]) - s[0][1] * (s[1][0] * s[2][2] - s[1][2] * s[2][0]) +
           s[0][2] * (s[1][0] * s[2][1] - s[1][1] * s[2][0]);
  };
  std::int64_t det = 0;
  for (int j = 0; j < 4; ++j) det += ((j % 2 == 0) ? 1 : -1) * m[0][j] * det3(0, j);
  return det;
}

Eigen::Matrix4d block_form(double lambda, double alpha) {
  Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
  d(0, 0) = lambda;
  d(1, 1) = 1.0 / lambda;
  d(2, 2) = std::cos(alpha);
  d(2, 3) = -std::sin(alpha);
  d(3, 2) = std::sin(alpha);
  d(3, 3) = std::cos(alpha);
  return d;
}

namespace {

double polish_root(const ReciprocalQuartic& q, double x) {
  for (int i = 0; i < 3; ++i) {
    const double dp = ((4 * x + 3 * q.a) * x + 2 * q.b) * x + q.a;
    if (dp == 0.0) break;
    x -= q(x) / dp;
  }
  return x;
}

}  // namespace

LoxodromicCertificate certify(const ReciprocalQuartic& q) {
  const QuarticStatus status = classify_quartic(q);
  if (status != QuarticStatus::Accepted)
    throw Error(ErrorKind::NotLoxodromic, std::string("quartic rejected: ") + to_string(status));

  LoxodromicCertificate cert;
  cert.quartic = q;
  const double disc = std::sqrt(static_cast<double>(q.a * q.a - 4 * (q.b - 2)));
  const double y1 = (-static_cast<double>(q.a) + disc) / 2.0;
  const double y2 = (-static_cast<double>(q.a) - disc) / 2.0;
  cert.lambda = polish_root(q, (y1 + std::sqrt(y1 * y1 - 4.0)) / 2.0);
  cert.alpha = std::acos(y2 / 2.0);
  cert.companion = companion_matrix(q);
  cert.companion_det = determinant(cert.companion);

  // Rows (1, mu, mu^2, mu^3) are left eigenvectors of the companion matrix;
  // real and imaginary parts of the e^{i alpha} row give the rotation block.
  auto powers = [](std::complex<double> mu) {
    Eigen::Matrix<std::complex<double>, 1, 4> w;
    w << 1.0, mu, mu * mu, mu * mu * mu;
    return w;
  };
  Eigen::Matrix4d t;
  t.row(0) = powers(cert.lambda).real().normalized();
  t.row(1) = powers(1.0 / cert.lambda).real().normalized();
  const auto w = powers(std::polar(1.0, cert.alpha));
  const double scale = std::sqrt(w.real().squaredNorm() + w.imag().squaredNorm());
  t.row(2) = w.real() / scale;
  t.row(3) = w.imag() / scale;

  Eigen::Matrix4d c;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) c(i, j) = static_cast<double>(cert.companion[i][j]);
  cert.s_inv = t;
  cert.s = t.inverse();
  cert.residual = (cert.s_inv * c * cert.s - block_form(cert.lambda, cert.alpha)).cwiseAbs().maxCoeff();
  if (!(cert.residual < 1e-10))
    throw Error(ErrorKind::NotLoxodromic, "block-diagonalization residual " + std::to_string(cert.residual));
  return cert;
}

LatticeData build_gamma(const LoxodromicCertificate& cert) {
  LatticeData out;
  out.gamma0 = cert.s_inv;
  out.phi = block_form(cert.lambda, cert.alpha);
  out.lambda = cert.lambda;
  out.alpha = cert.alpha;
  Eigen::Matrix4d c;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) c(i, j) = static_cast<double>(cert.companion[i][j]);
  out.residual = (out.phi * cert.s_inv - cert.s_inv * c).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace ealab
