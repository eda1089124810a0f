#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ealab/rational.hpp"

namespace ealab {

inline constexpr std::size_t kMaxAlgebraDim = 12;

/// One nonzero row of a bracket table: [b_i, b_j] = sum_k coeffs[k] b_k.
struct BracketEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  std::vector<std::pair<std::size_t, Rational>> coeffs;
};

/// A finite-dimensional real Lie algebra given by exact structure constants
/// c[i][j][k] in a named basis. Immutable after construction; the adjoint
/// matrices of the basis vectors are built eagerly.
class LieAlgebra {
 public:
  /// `structure` is the flattened tensor c[(i*dim + j)*dim + k]. Throws
  /// InvalidInput on shape problems, dim > kMaxAlgebraDim, or a tensor that
  /// is not antisymmetric in (i, j). The Jacobi identity is not enforced here;
  /// see jacobi_residual().
  LieAlgebra(std::string name, std::vector<std::string> basis, std::vector<Rational> structure);

  /// Builds from a sparse bracket table; [b_j, b_i] is filled in by antisymmetry.
  static LieAlgebra from_brackets(std::string name, std::vector<std::string> basis,
                                  const std::vector<BracketEntry>& brackets);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<std::string>& basis_names() const { return basis_; }
  std::size_t basis_index(std::string_view name) const;

  const Rational& structure(std::size_t i, std::size_t j, std::size_t k) const {
    return c_[(i * dim() + j) * dim() + k];
  }

  /// ad of the i-th basis vector; column j holds the coordinates of [b_i, b_j].
  const QMatrix& ad_basis(std::size_t i) const { return ad_[i]; }

 private:
  std::string name_;
  std::vector<std::string> basis_;
  std::vector<Rational> c_;
  std::vector<QMatrix> ad_;
};

/// Builtins in their fixed basis order:
///   sl2: (e, h, f)   sol: (e1, e2, h)   euc: (f1, f2, e)
///   sol_euc: (e1, e2, h, f1, f2, e)
/// Throws NotFound for any other name.
LieAlgebra load_builtin(std::string_view name);
std::vector<std::string> builtin_names();

/// Block-diagonal structure constants, cross brackets zero. The default name is "a+b".
LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b, std::string name = "");

QVector bracket(const LieAlgebra& alg, const QVector& x, const QVector& y);
Eigen::VectorXd bracket(const LieAlgebra& alg, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

QMatrix ad_matrix(const LieAlgebra& alg, const QVector& x);
Eigen::MatrixXd ad_matrix(const LieAlgebra& alg, const Eigen::VectorXd& x);

/// Max |coefficient| of the cyclic Jacobi sum over all basis triples.
Rational jacobi_residual(const LieAlgebra& alg);

/// K[i][j] = trace(ad_{b_i} ad_{b_j}).
QMatrix killing_form(const LieAlgebra& alg);

}  // namespace ealab
