#include "ealab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ealab/error.hpp"

namespace ealab {

BilinearForm::BilinearForm(QMatrix gram) : gram_(std::move(gram)) {
  if (!gram_.is_symmetric()) throw Error(ErrorKind::InvalidInput, "bilinear form must be symmetric");
}

Rational BilinearForm::operator()(const QVector& x, const QVector& y) const {
  if (x.size() != dim() || y.size() != dim())
    throw Error(ErrorKind::InvalidInput, "form evaluation: length mismatch");
  return dot(x, gram_ * y);
}

double BilinearForm::operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  if (static_cast<std::size_t>(x.size()) != dim() || static_cast<std::size_t>(y.size()) != dim())
    throw Error(ErrorKind::InvalidInput, "form evaluation: length mismatch");
  return x.dot(gram_.to_eigen() * y);
}

BilinearForm direct_sum(const BilinearForm& a, const BilinearForm& b) {
  const std::size_t na = a.dim();
  QMatrix m(na + b.dim(), na + b.dim());
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) m(i, j) = a.gram()(i, j);
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) m(na + i, na + j) = b.gram()(i, j);
  return BilinearForm(std::move(m));
}

Inertia inertia(const BilinearForm& form) {
  QMatrix m = form.gram();
  const std::size_t n = m.rows();
  Inertia out;
  auto swap_index = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < n; ++j) std::swap(m(a, j), m(b, j));
    for (std::size_t i = 0; i < n; ++i) std::swap(m(i, a), m(i, b));
  };
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && m(pivot, pivot) == 0) ++pivot;
    if (pivot == n) {
      // All remaining diagonal entries vanish: b_i <- b_i + b_j turns an
      // off-diagonal entry into the diagonal value 2 m(i, j).
      bool found = false;
      for (std::size_t i = k; i < n && !found; ++i)
        for (std::size_t j = i + 1; j < n && !found; ++j)
          if (m(i, j) != 0) {
            for (std::size_t c = 0; c < n; ++c) m(i, c) += m(j, c);
            for (std::size_t r = 0; r < n; ++r) m(r, i) += m(r, j);
            pivot = i;
            found = true;
          }
      if (!found) {
        out.zero = static_cast<int>(n - k);
        return out;
      }
    }
    swap_index(k, pivot);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m(i, k) == 0) continue;
      Rational f = m(i, k) / m(k, k);
      for (std::size_t c = k; c < n; ++c) m(i, c) -= f * m(k, c);
      for (std::size_t r = k; r < n; ++r) m(r, i) -= f * m(r, k);
    }
    if (m(k, k) > 0) {
      ++out.positive;
    } else {
      ++out.negative;
    }
  }
  return out;
}

Inertia numeric_inertia(const Eigen::MatrixXd& symmetric, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  Inertia out;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > tol * scale) {
      ++out.positive;
    } else if (ev(i) < -tol * scale) {
      ++out.negative;
    } else {
      ++out.zero;
    }
  }
  return out;
}

Signature signature(const BilinearForm& form) {
  Inertia in = inertia(form);
  if (in.zero != 0) {
    throw Error(ErrorKind::DegenerateForm,
                "form is degenerate (kernel dimension " + std::to_string(in.zero) + ")");
  }
  return {in.positive, in.negative};
}

MetricAlgebra::MetricAlgebra(LieAlgebra algebra, BilinearForm form, std::string metric_name)
    : algebra_(std::move(algebra)), form_(std::move(form)), metric_name_(std::move(metric_name)) {
  if (form_.dim() != algebra_.dim()) {
    throw Error(ErrorKind::InvalidInput, "metric dimension " + std::to_string(form_.dim()) +
                                             " does not match algebra dimension " +
                                             std::to_string(algebra_.dim()));
  }
  if (determinant(form_.gram()) == 0) throw Error(ErrorKind::DegenerateForm, "metric is degenerate");
  const QMatrix& q = form_.gram();
  const QMatrix q_inv = inverse(q);
  adstar_.reserve(dim());
  adstar_d_.reserve(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    adstar_.push_back(q_inv * algebra_.ad_basis(i).transpose() * q);
    adstar_d_.push_back(adstar_.back().to_eigen());
  }
  gram_d_ = q.to_eigen();
}

QMatrix adstar_matrix(const MetricAlgebra& ma, const QVector& x) {
  if (x.size() != ma.dim()) throw Error(ErrorKind::InvalidInput, "adstar_matrix: length mismatch");
  QMatrix m(ma.dim(), ma.dim());
  for (std::size_t i = 0; i < ma.dim(); ++i)
    if (x[i] != 0) m = m + x[i] * ma.adstar(i);
  return m;
}

Eigen::MatrixXd adstar_matrix(const MetricAlgebra& ma, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != ma.dim())
    throw Error(ErrorKind::InvalidInput, "adstar_matrix: length mismatch");
  const auto n = static_cast<Eigen::Index>(ma.dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m += x(i) * ma.adstar_d(static_cast<std::size_t>(i));
  return m;
}

Rational biinvariance_residual(const MetricAlgebra& ma) {
  Rational worst = 0;
  for (std::size_t i = 0; i < ma.dim(); ++i)
    worst = std::max(worst, (ma.adstar(i) + ma.ad(i)).max_abs());
  return worst;
}

QMatrix self_adjoint_factor(const BilinearForm& bi, const BilinearForm& q) {
  if (bi.dim() != q.dim()) throw Error(ErrorKind::InvalidInput, "forms have different dimensions");
  if (determinant(bi.gram()) == 0) throw Error(ErrorKind::DegenerateForm, "reference form is degenerate");
  return inverse(bi.gram()) * q.gram();
}

QMatrix sl2_metric_factor() { return QMatrix{{1, 1, 0}, {0, 1, 1}, {0, 0, 1}}; }

BilinearForm builtin_metric(std::string_view name) {
  if (name == "sl2") return BilinearForm(killing_form(load_builtin("sl2")) * sl2_metric_factor());
  if (name == "sol" || name == "euc") {
    // Same Gram matrix in both bases: pairing of slots (0, 2) and (1, 1).
    return BilinearForm(QMatrix{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}});
  }
  if (name == "sol_euc") return direct_sum(builtin_metric("sol"), builtin_metric("euc"));
  throw Error(ErrorKind::NotFound, "no builtin metric for '" + std::string(name) + "'");
}

MetricAlgebra load_metric_algebra(std::string_view name) {
  return MetricAlgebra(load_builtin(name), builtin_metric(name), "default");
}

MetricAlgebra killing_metric_algebra(const LieAlgebra& alg) {
  return MetricAlgebra(alg, BilinearForm(killing_form(alg)), "killing");
}

}  // namespace ealab
