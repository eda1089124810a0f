#include "ealab/lie_algebra.hpp"

#include <algorithm>
#include <utility>

#include "ealab/error.hpp"

namespace ealab {

LieAlgebra::LieAlgebra(std::string name, std::vector<std::string> basis,
                       std::vector<Rational> tensor)
    : name_(std::move(name)), basis_(std::move(basis)), c_(std::move(tensor)) {
  const std::size_t n = basis_.size();
  if (n == 0) throw Error(ErrorKind::InvalidInput, "algebra must have positive dimension");
  if (n > kMaxAlgebraDim) {
    throw Error(ErrorKind::InvalidInput,
                "algebra dimension " + std::to_string(n) + " exceeds limit " +
                    std::to_string(kMaxAlgebraDim));
  }
  if (c_.size() != n * n * n) {
    throw Error(ErrorKind::InvalidInput, "structure tensor must have dim^3 entries");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (structure(i, j, k) != -structure(j, i, k)) {
          throw Error(ErrorKind::InvalidInput,
                      "structure constants not antisymmetric at [" + basis_[i] + "," +
                          basis_[j] + "]");
        }

  ad_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    QMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) m(k, j) = structure(i, j, k);
    ad_.push_back(std::move(m));
  }
}

LieAlgebra LieAlgebra::from_brackets(std::string name, std::vector<std::string> basis,
                                     const std::vector<BracketEntry>& brackets) {
  const std::size_t n = basis.size();
  std::vector<Rational> c(n * n * n, Rational(0));
  std::vector<bool> seen(n * n, false);
  for (const auto& b : brackets) {
    if (b.i >= n || b.j >= n) throw Error(ErrorKind::InvalidInput, "bracket index out of range");
    if (b.i == b.j) {
      bool nonzero = std::any_of(b.coeffs.begin(), b.coeffs.end(),
                                 [](const auto& kc) { return kc.second != 0; });
      if (nonzero) throw Error(ErrorKind::InvalidInput, "[b_i, b_i] must vanish");
      continue;
    }
    if (seen[b.i * n + b.j]) {
      throw Error(ErrorKind::InvalidInput, "bracket [" + basis[b.i] + "," + basis[b.j] +
                                               "] given more than once");
    }
    seen[b.i * n + b.j] = seen[b.j * n + b.i] = true;
    for (const auto& [k, q] : b.coeffs) {
      if (k >= n) throw Error(ErrorKind::InvalidInput, "bracket coefficient index out of range");
      c[(b.i * n + b.j) * n + k] = q;
      c[(b.j * n + b.i) * n + k] = -q;
    }
  }
  return LieAlgebra(std::move(name), std::move(basis), std::move(c));
}

std::size_t LieAlgebra::basis_index(std::string_view name) const {
  auto it = std::find(basis_.begin(), basis_.end(), name);
  if (it == basis_.end()) {
    throw Error(ErrorKind::NotFound,
                "no basis vector named '" + std::string(name) + "' in " + name_);
  }
  return static_cast<std::size_t>(it - basis_.begin());
}

std::vector<std::string> builtin_names() { return {"sl2", "sol", "euc", "sol_euc"}; }

LieAlgebra load_builtin(std::string_view name) {
  using E = BracketEntry;
  if (name == "sl2") {
    // [f,e] = h, [h,e] = -e, [h,f] = f
    return LieAlgebra::from_brackets("sl2", {"e", "h", "f"},
                                     {E{0, 1, {{0, 1}}}, E{0, 2, {{1, -1}}}, E{1, 2, {{2, 1}}}});
  }
  if (name == "sol") {
    // [h,e1] = e1, [h,e2] = -e2
    return LieAlgebra::from_brackets("sol", {"e1", "e2", "h"},
                                     {E{2, 0, {{0, 1}}}, E{2, 1, {{1, -1}}}});
  }
  if (name == "euc") {
    // [e,f1] = -f2, [e,f2] = f1
    return LieAlgebra::from_brackets("euc", {"f1", "f2", "e"},
                                     {E{2, 0, {{1, -1}}}, E{2, 1, {{0, 1}}}});
  }
  if (name == "sol_euc") return direct_sum(load_builtin("sol"), load_builtin("euc"), "sol_euc");
  throw Error(ErrorKind::NotFound, "unknown builtin algebra '" + std::string(name) + "'");
}

LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b, std::string name) {
  const std::size_t na = a.dim();
  const std::size_t n = na + b.dim();
  if (n > kMaxAlgebraDim) {
    throw Error(ErrorKind::InvalidInput, "direct sum dimension exceeds limit");
  }
  std::vector<Rational> c(n * n * n, Rational(0));
  auto at = [n](std::size_t i, std::size_t j, std::size_t k) { return (i * n + j) * n + k; };
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      for (std::size_t k = 0; k < na; ++k) c[at(i, j, k)] = a.structure(i, j, k);
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j)
      for (std::size_t k = 0; k < b.dim(); ++k)
        c[at(na + i, na + j, na + k)] = b.structure(i, j, k);
  std::vector<std::string> basis = a.basis_names();
  basis.insert(basis.end(), b.basis_names().begin(), b.basis_names().end());
  if (name.empty()) name = a.name() + "+" + b.name();
  return LieAlgebra(std::move(name), std::move(basis), std::move(c));
}

namespace {

void check_length(const LieAlgebra& alg, std::size_t len) {
  if (len != alg.dim()) {
    throw Error(ErrorKind::InvalidInput, "vector has length " + std::to_string(len) +
                                             ", algebra dimension is " +
                                             std::to_string(alg.dim()));
  }
}

}  // namespace

QVector bracket(const LieAlgebra& alg, const QVector& x, const QVector& y) {
  check_length(alg, x.size());
  check_length(alg, y.size());
  const std::size_t n = alg.dim();
  QVector out(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (y[j] == 0) continue;
      Rational w = x[i] * y[j];
      for (std::size_t k = 0; k < n; ++k) {
        const Rational& c = alg.structure(i, j, k);
        if (c != 0) out[k] += w * c;
      }
    }
  }
  return out;
}

Eigen::VectorXd bracket(const LieAlgebra& alg, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  check_length(alg, static_cast<std::size_t>(x.size()));
  check_length(alg, static_cast<std::size_t>(y.size()));
  return ad_matrix(alg, x) * y;
}

QMatrix ad_matrix(const LieAlgebra& alg, const QVector& x) {
  check_length(alg, x.size());
  const std::size_t n = alg.dim();
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    m = m + x[i] * alg.ad_basis(i);
  }
  return m;
}

Eigen::MatrixXd ad_matrix(const LieAlgebra& alg, const Eigen::VectorXd& x) {
  check_length(alg, static_cast<std::size_t>(x.size()));
  const auto n = static_cast<Eigen::Index>(alg.dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (x(i) == 0.0) continue;
    m += x(i) * alg.ad_basis(static_cast<std::size_t>(i)).to_eigen();
  }
  return m;
}

Rational jacobi_residual(const LieAlgebra& alg) {
  const std::size_t n = alg.dim();
  Rational worst = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        QVector bi = unit_qvector(n, i), bj = unit_qvector(n, j), bk = unit_qvector(n, k);
        QVector s = bracket(alg, bi, bracket(alg, bj, bk)) +
                    bracket(alg, bj, bracket(alg, bk, bi)) +
                    bracket(alg, bk, bracket(alg, bi, bj));
        worst = std::max(worst, max_abs(s));
      }
  return worst;
}

QMatrix killing_form(const LieAlgebra& alg) {
  const std::size_t n = alg.dim();
  QMatrix k(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      QMatrix p = alg.ad_basis(i) * alg.ad_basis(j);
      Rational tr = 0;
      for (std::size_t d = 0; d < n; ++d) tr += p(d, d);
      k(i, j) = tr;
      k(j, i) = tr;
    }
  return k;
}

}  // namespace ealab
