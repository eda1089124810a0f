#include "ealab/rational.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "ealab/error.hpp"

namespace ealab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DegenerateForm: return "DegenerateForm";
    case ErrorKind::InvalidRealization: return "InvalidRealization";
    case ErrorKind::NotLoxodromic: return "NotLoxodromic";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

[[noreturn]] void bad_rational(std::string_view text) {
  throw Error(ErrorKind::Parse, "not a rational number: '" + std::string(text) + "'");
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad_rational(text);
    mpz_class d(std::string(den), 10);
    if (d == 0) bad_rational(text);
    value = Rational(mpz_class(std::string(num), 10), d);
    value.canonicalize();
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      bad_rational(text);
    }
    mpz_class digits(std::string(whole) + std::string(frac), 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(frac.size()));
    value = Rational(digits, scale);
    value.canonicalize();
  } else {
    if (!all_digits(body)) bad_rational(text);
    value = Rational(mpz_class(std::string(body), 10));
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value) { return value.get_str(); }

Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

QVector make_qvector(std::initializer_list<Rational> values) { return QVector(values); }

QVector zero_qvector(std::size_t n) { return QVector(n, Rational(0)); }

QVector unit_qvector(std::size_t n, std::size_t index) {
  QVector v(n, Rational(0));
  v.at(index) = 1;
  return v;
}

Eigen::VectorXd to_eigen(const QVector& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].get_d();
  return out;
}

Rational dot(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::InvalidInput, "dot: length mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational max_abs(const QVector& v) {
  Rational m = 0;
  for (const auto& x : v) m = std::max(m, abs(x));
  return m;
}

bool is_zero(const QVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

QVector operator+(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::InvalidInput, "vector length mismatch");
  QVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

QVector operator-(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::InvalidInput, "vector length mismatch");
  QVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

QVector operator*(const Rational& s, const QVector& v) {
  QVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
  return out;
}

QMatrix::QMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

QMatrix::QMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error(ErrorKind::InvalidInput, "ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

QVector QMatrix::column(std::size_t j) const {
  QVector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

bool QMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return x == 0; });
}

bool QMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

Rational QMatrix::max_abs() const {
  Rational m = 0;
  for (const auto& x : data_) m = std::max(m, ealab::abs(x));
  return m;
}

Eigen::MatrixXd QMatrix::to_eigen() const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j).get_d();
  return out;
}

bool operator==(const QMatrix& a, const QMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::InvalidInput, "matrix product: shape mismatch");
  QMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

QVector operator*(const QMatrix& a, const QVector& v) {
  if (a.cols() != v.size()) throw Error(ErrorKind::InvalidInput, "matrix-vector product: shape mismatch");
  QVector out(a.rows(), Rational(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
  return out;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::InvalidInput, "matrix sum: shape mismatch");
  QMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) { return a + Rational(-1) * b; }

QMatrix operator*(const Rational& s, const QMatrix& a) {
  QMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
  return c;
}

namespace {

// Reduces `m` in place to row echelon form; returns the rank and tracks the
// determinant sign/product for square inputs.
std::size_t row_reduce(QMatrix& m, Rational* det) {
  std::size_t r = 0;
  Rational d = 1;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t pivot = r;
    while (pivot < m.rows() && m(pivot, c) == 0) ++pivot;
    if (pivot == m.rows()) {
      d = 0;
      continue;
    }
    if (pivot != r) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(r, j));
      d = -d;
    }
    d *= m(r, c);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, c) == 0) continue;
      Rational f = m(i, c) / m(r, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  if (det != nullptr) *det = (r == m.rows() && m.rows() == m.cols()) ? d : Rational(0);
  return r;
}

}  // namespace

Rational determinant(const QMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidInput, "determinant of non-square matrix");
  QMatrix work = m;
  Rational det;
  row_reduce(work, &det);
  return det;
}

std::size_t rank(const QMatrix& m) {
  QMatrix work = m;
  return row_reduce(work, nullptr);
}

QMatrix inverse(const QMatrix& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw Error(ErrorKind::InvalidInput, "inverse of non-square matrix");
  QMatrix a = m;
  QMatrix inv = QMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && a(pivot, c) == 0) ++pivot;
    if (pivot == n) throw Error(ErrorKind::InvalidInput, "matrix is singular");
    if (pivot != c) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(c, j));
        std::swap(inv(pivot, j), inv(c, j));
      }
    }
    Rational p = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= p;
      inv(c, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c) == 0) continue;
      Rational f = a(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

QVector solve(const QMatrix& m, const QVector& b) { return inverse(m) * b; }

QMatrix from_columns(const std::vector<QVector>& columns) {
  if (columns.empty()) return {};
  QMatrix m(columns.front().size(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != m.rows()) throw Error(ErrorKind::InvalidInput, "column length mismatch");
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = columns[j][i];
  }
  return m;
}

}  // namespace ealab
