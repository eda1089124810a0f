#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ealab/lie_algebra.hpp"
#include "ealab/rational.hpp"

namespace ealab {

/// Symmetric bilinear form with exact entries. Nondegeneracy is only required
/// once the form is used as a metric (MetricAlgebra checks it).
class BilinearForm {
 public:
  BilinearForm() = default;
  /// Throws InvalidInput when `gram` is not square and symmetric.
  explicit BilinearForm(QMatrix gram);

  std::size_t dim() const { return gram_.rows(); }
  const QMatrix& gram() const { return gram_; }

  Rational operator()(const QVector& x, const QVector& y) const;
  double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  friend bool operator==(const BilinearForm& a, const BilinearForm& b) { return a.gram_ == b.gram_; }

 private:
  QMatrix gram_;
};

BilinearForm direct_sum(const BilinearForm& a, const BilinearForm& b);

struct Inertia {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};

/// Raw (pos, neg) counts. No ordering convention is imposed: a form with four
/// positive and two negative directions reports {4, 2}, whichever of the two
/// the caller calls "time".
struct Signature {
  int positive = 0;
  int negative = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Exact Sylvester inertia by symmetric congruence reduction over the rationals.
Inertia inertia(const BilinearForm& form);
/// Eigenvalue-based inertia for float input; |eigenvalue| <= tol * max(1, spectral radius) counts as zero.
Inertia numeric_inertia(const Eigen::MatrixXd& symmetric, double tol = 1e-10);
/// Throws DegenerateForm when the form has a kernel.
Signature signature(const BilinearForm& form);

/// A Lie algebra together with a nondegenerate metric, with ad and ad* of every
/// basis vector cached in both exact and floating form.
///
/// ad*_x is pinned by form(ad*_x u, w) = form(u, [x, w]), i.e. ad*_x = Q^-1 ad_x^T Q.
class MetricAlgebra {
 public:
  /// Throws InvalidInput on a dimension mismatch and DegenerateForm when det(Q) = 0.
  MetricAlgebra(LieAlgebra algebra, BilinearForm form, std::string metric_name = "custom");

  const LieAlgebra& algebra() const { return algebra_; }
  const BilinearForm& form() const { return form_; }
  const std::string& metric_name() const { return metric_name_; }
  std::size_t dim() const { return algebra_.dim(); }

  const QMatrix& ad(std::size_t i) const { return algebra_.ad_basis(i); }
  const QMatrix& adstar(std::size_t i) const { return adstar_[i]; }
  const Eigen::MatrixXd& adstar_d(std::size_t i) const { return adstar_d_[i]; }
  const Eigen::MatrixXd& gram_d() const { return gram_d_; }

 private:
  LieAlgebra algebra_;
  BilinearForm form_;
  std::string metric_name_;
  std::vector<QMatrix> adstar_;
  std::vector<Eigen::MatrixXd> adstar_d_;
  Eigen::MatrixXd gram_d_;
};

QMatrix adstar_matrix(const MetricAlgebra& ma, const QVector& x);
Eigen::MatrixXd adstar_matrix(const MetricAlgebra& ma, const Eigen::VectorXd& x);

/// max_i max_entry |ad*_{b_i} + ad_{b_i}|; zero exactly when the form is bi-invariant.
Rational biinvariance_residual(const MetricAlgebra& ma);

/// The unique bi-self-adjoint A with q(v, w) = bi(v, A w), i.e. A = Bi^-1 Q.
/// Throws DegenerateForm when `bi` is degenerate.
QMatrix self_adjoint_factor(const BilinearForm& bi, const BilinearForm& q);

/// Default metric shipped with each builtin algebra:
///   sl2     q(v, w) = K(v, A w), K the Killing form, A upper bidiagonal with unit entries
///   sol     q(e1, h) = q(e2, e2) = 1, other basis pairings zero
///   euc     g(f1, e) = g(f2, f2) = 1, other basis pairings zero
///   sol_euc q + g on the product basis
BilinearForm builtin_metric(std::string_view name);
/// Upper bidiagonal matrix with unit diagonal and superdiagonal used by the sl2 metric.
QMatrix sl2_metric_factor();
MetricAlgebra load_metric_algebra(std::string_view name);
/// The Killing form as a metric; throws DegenerateForm for non-semisimple algebras.
MetricAlgebra killing_metric_algebra(const LieAlgebra& alg);

}  // namespace ealab
