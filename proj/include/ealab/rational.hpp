#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

namespace ealab {

using Rational = mpq_class;
using QVector = std::vector<Rational>;

/// Parses "p/q", an integer, or a finite decimal ("0.375") into an exact rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& value);

Rational abs(const Rational& value);

QVector make_qvector(std::initializer_list<Rational> values);
QVector zero_qvector(std::size_t n);
QVector unit_qvector(std::size_t n, std::size_t index);
Eigen::VectorXd to_eigen(const QVector& v);
Rational dot(const QVector& a, const QVector& b);
Rational max_abs(const QVector& v);
bool is_zero(const QVector& v);

QVector operator+(const QVector& a, const QVector& b);
QVector operator-(const QVector& a, const QVector& b);
QVector operator*(const Rational& s, const QVector& v);

/// Dense row-major matrix of exact rationals. Small by construction (dim <= 12),
/// so no attempt is made at blocking or sparsity.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols);
  QMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static QMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  QMatrix transpose() const;
  QVector column(std::size_t j) const;
  bool is_zero() const;
  bool is_symmetric() const;
  Rational max_abs() const;
  Eigen::MatrixXd to_eigen() const;

  friend bool operator==(const QMatrix& a, const QMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

QMatrix operator*(const QMatrix& a, const QMatrix& b);
QVector operator*(const QMatrix& a, const QVector& v);
QMatrix operator+(const QMatrix& a, const QMatrix& b);
QMatrix operator-(const QMatrix& a, const QMatrix& b);
QMatrix operator*(const Rational& s, const QMatrix& a);

Rational determinant(const QMatrix& m);
/// Gauss-Jordan inverse; throws InvalidInput when `m` is singular or not square.
QMatrix inverse(const QMatrix& m);
/// Solves m * x = b exactly. Throws InvalidInput when m is singular.
QVector solve(const QMatrix& m, const QVector& b);
/// Rank by exact row reduction.
std::size_t rank(const QMatrix& m);

/// Builds the matrix whose columns are the given vectors.
QMatrix from_columns(const std::vector<QVector>& columns);

}  // namespace ealab
