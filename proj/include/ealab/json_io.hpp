#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "ealab/lie_algebra.hpp"
#include "ealab/metric.hpp"

namespace ealab {

using Json = nlohmann::ordered_json;

/// Algebra document: {"name"?, "dim", "basis", "brackets": [{"i", "j", "coeffs": {"k": "p/q"}}]}.
/// Keys of "coeffs" are basis indices or basis names; values are "p/q" strings or integers.
/// Throws Error(Parse) with a line:column or JSON-pointer location; `source` prefixes the message.
LieAlgebra parse_algebra_json(std::string_view text, std::string_view source = "<input>");
/// Metric document: {"entries": [{"i", "j", "value"}]}; the symmetric entry is filled in,
/// conflicting duplicates are an error, missing entries are zero.
BilinearForm parse_metric_json(std::string_view text, std::size_t dim, std::string_view source = "<input>");

/// File variants; NotFound when the file cannot be read. Algebras failing the
/// Jacobi identity are rejected with InvalidInput.
LieAlgebra load_algebra_file(const std::string& path);
BilinearForm load_metric_file(const std::string& path, std::size_t dim);

Json algebra_to_json(const LieAlgebra& alg);
Json metric_to_json(const BilinearForm& form);

Json to_json(const Rational& q);  // "p/q" string (or "n" for integers)
Json to_json(const QVector& v);
Json to_json(const QMatrix& m);   // array of rows
Json to_json(const Eigen::VectorXd& v);
Json to_json(const Eigen::MatrixXd& m);

}  // namespace ealab
