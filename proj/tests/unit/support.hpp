#pragma once

// Test-side oracles. Nothing here calls into the library's ad*, field, or
// inertia code; each oracle recomputes from definitions.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ealab/lie_algebra.hpp"
#include "ealab/metric.hpp"

namespace oracle {

using ealab::QMatrix;
using ealab::QVector;
using ealab::Rational;

class RandomRational {
 public:
  explicit RandomRational(std::uint64_t seed) : rng_(seed) {}

  Rational next(int num_range = 9, int den_range = 7) {
    std::uniform_int_distribution<int> num(-num_range, num_range), den(1, den_range);
    Rational q(num(rng_), den(rng_));
    q.canonicalize();
    return q;
  }
  QVector vector(std::size_t n) {
    QVector v(n);
    for (auto& x : v) x = next();
    return v;
  }
  QMatrix matrix(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = next(3, 2);
    return m;
  }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  Eigen::VectorXd gaussian(std::size_t n) {
    std::normal_distribution<double> g;
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (auto& x : v) x = g(rng_);
    return v;
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Plain Gaussian elimination; returns false when singular.
inline bool gauss_solve(std::vector<std::vector<Rational>> a, std::vector<Rational> b, std::vector<Rational>& x) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return false;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

/// [x, y] straight from the structure constants.
inline QVector bracket(const ealab::LieAlgebra& alg, const QVector& x, const QVector& y) {
  const std::size_t n = alg.dim();
  QVector out(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) out[k] += x[i] * y[j] * alg.structure(i, j, k);
  return out;
}

inline Rational form(const QMatrix& q, const QVector& x, const QVector& y) {
  Rational s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) s += x[i] * q(i, j) * y[j];
  return s;
}

/// F(x) from its defining property q(F(x), w) = q(x, [x, w]) for every basis w.
inline QVector field(const ealab::LieAlgebra& alg, const QMatrix& q, const QVector& x) {
  const std::size_t n = alg.dim();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  std::vector<Rational> rhs(n);
  for (std::size_t w = 0; w < n; ++w) {
    QVector bw(n, Rational(0));
    bw[w] = 1;
    for (std::size_t j = 0; j < n; ++j) a[w][j] = q(j, w);
    rhs[w] = form(q, x, oracle::bracket(alg, x, bw));
  }
  QVector out;
  if (!gauss_solve(a, rhs, out)) throw std::runtime_error("degenerate form in oracle");
  return out;
}

/// (positive, negative) eigenvalue counts of a symmetric matrix.
inline std::pair<int, int> eigen_signs(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  int pos = 0, neg = 0;
  for (double ev : es.eigenvalues()) {
    if (ev > 1e-9) ++pos;
    if (ev < -1e-9) ++neg;
  }
  return {pos, neg};
}

inline QMatrix congruence(const QMatrix& q, const QMatrix& s) { return s.transpose() * q * s; }

/// Random invertible rational matrix (unit lower times unit upper triangular, times a permutation-free diagonal).
inline QMatrix random_invertible(RandomRational& rr, std::size_t n) {
  QMatrix l = QMatrix::identity(n), u = QMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      l(i, j) = rr.next(2, 2);
      u(j, i) = rr.next(2, 2);
    }
  QMatrix d = QMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational x = 0;
    while (x == 0) x = rr.next(3, 2);
    d(i, i) = x;
  }
  return l * d * u;
}

inline QVector qv(std::initializer_list<Rational> v) { return QVector(v); }

}  // namespace oracle
