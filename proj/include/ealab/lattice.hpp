#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace ealab {

/// p(x) = x^4 + a x^3 + b x^2 + a x + 1.
struct ReciprocalQuartic {
  std::int64_t a = 0;
  std::int64_t b = 0;

  std::array<std::int64_t, 5> coefficients() const { return {1, a, b, a, 1}; }  // leading first
  double operator()(double x) const { return (((x + a) * x + b) * x + a) * x + 1; }
  friend bool operator==(const ReciprocalQuartic&, const ReciprocalQuartic&) = default;
};

/// Outcome of the exact acceptance test. With y = x + 1/x the quartic becomes
/// the resolvent y^2 + a y + (b - 2); acceptance needs a resolvent root above 2
/// (a real pair lambda, 1/lambda), the other in (-2, 2) (a pair on the unit
/// circle), and p irreducible over Q.
enum class QuarticStatus {
  Accepted,
  ComplexResolvent,
  NoHyperbolicRoot,
  NoEllipticRoot,
  Reducible,
};
const char* to_string(QuarticStatus s);

/// Integer-only decision; no floating point is involved.
QuarticStatus classify_quartic(const ReciprocalQuartic& q);

/// Exact irreducibility over Q: no root at +-1 and no integer factorization into monic quadratics.
bool is_irreducible(const ReciprocalQuartic& q);

/// All accepted (a, b) with |a|, |b| <= bound, ordered by a, then b.
std::vector<ReciprocalQuartic> enumerate_candidates(std::int64_t bound);

using IntMatrix4 = std::array<std::array<std::int64_t, 4>, 4>;

/// Companion matrix: ones on the subdiagonal, last column -(1, a, b, a).
IntMatrix4 companion_matrix(const ReciprocalQuartic& q);
/// Exact determinant of an integer 4x4 matrix.
std::int64_t determinant(const IntMatrix4& m);

struct LoxodromicCertificate {
  ReciprocalQuartic quartic;
  double lambda = 0.0;  // > 1
  double alpha = 0.0;   // in (0, pi)
  IntMatrix4 companion{};
  std::int64_t companion_det = 0;
  /// S^-1 C S = diag(lambda, 1/lambda, R_alpha), R_alpha the rotation by alpha.
  Eigen::Matrix4d s;
  Eigen::Matrix4d s_inv;
  double residual = 0.0;  // max entry of S^-1 C S - diag(lambda, 1/lambda, R_alpha)
};

/// diag(lambda, 1/lambda, R_alpha).
Eigen::Matrix4d block_form(double lambda, double alpha);

/// Throws NotLoxodromic unless classify_quartic accepts q and the residual is below 1e-10.
LoxodromicCertificate certify(const ReciprocalQuartic& q);

struct LatticeData {
  /// Columns generate Gamma_0; phi maps each column to an integer combination of the columns.
  Eigen::Matrix4d gamma0;
  Eigen::Matrix4d phi;
  double lambda = 0.0;
  double alpha = 0.0;
  double residual = 0.0;  // max entry of phi * S^-1 - S^-1 * C
};

LatticeData build_gamma(const LoxodromicCertificate& cert);

}  // namespace ealab
