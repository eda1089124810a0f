#include "ealab/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "ealab/error.hpp"

namespace ealab {

namespace {

[[noreturn]] void fail_at(std::string_view source, const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Parse, std::string(source) + ": at " + where + ": " + what);
}

Json parse_document(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw Error(ErrorKind::Parse, std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

const Json& member(const Json& obj, const char* key, const std::string& where, std::string_view source) {
  if (!obj.is_object()) fail_at(source, where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail_at(source, where, std::string("missing key \"") + key + "\"");
  return *it;
}

std::size_t index_value(const Json& j, const std::string& where, std::string_view source) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) fail_at(source, where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

Rational rational_value(const Json& j, const std::string& where, std::string_view source) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      fail_at(source, where, e.what());
    }
  }
  fail_at(source, where, "expected a rational as a \"p/q\" string or an integer");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::NotFound, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

LieAlgebra parse_algebra_json(std::string_view text, std::string_view source) {
  const Json doc = parse_document(text, source);
  if (!doc.is_object()) fail_at(source, "/", "expected an object");

  const std::size_t dim = index_value(member(doc, "dim", "/", source), "/dim", source);
  if (dim == 0 || dim > kMaxAlgebraDim)
    fail_at(source, "/dim", "dimension must be between 1 and " + std::to_string(kMaxAlgebraDim));

  const Json& basis_json = member(doc, "basis", "/", source);
  if (!basis_json.is_array() || basis_json.size() != dim) fail_at(source, "/basis", "expected an array of dim names");
  std::vector<std::string> basis;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < dim; ++i) {
    const std::string where = "/basis/" + std::to_string(i);
    if (!basis_json[i].is_string()) fail_at(source, where, "expected a string");
    basis.push_back(basis_json[i].get<std::string>());
    if (!seen.insert(basis.back()).second) fail_at(source, where, "duplicate basis name \"" + basis.back() + "\"");
  }

  std::string name = "custom";
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) fail_at(source, "/name", "expected a string");
    name = it->get<std::string>();
  }

  std::vector<BracketEntry> entries;
  if (auto it = doc.find("brackets"); it != doc.end()) {
    if (!it->is_array()) fail_at(source, "/brackets", "expected an array");
    for (std::size_t n = 0; n < it->size(); ++n) {
      const std::string where = "/brackets/" + std::to_string(n);
      const Json& row = (*it)[n];
      BracketEntry e;
      e.i = index_value(member(row, "i", where, source), where + "/i", source);
      e.j = index_value(member(row, "j", where, source), where + "/j", source);
      if (e.i >= dim) fail_at(source, where + "/i", "index out of range");
      if (e.j >= dim) fail_at(source, where + "/j", "index out of range");
      const Json& coeffs = member(row, "coeffs", where, source);
      if (!coeffs.is_object()) fail_at(source, where + "/coeffs", "expected an object");
      for (const auto& [key, value] : coeffs.items()) {
        const std::string cw = where + "/coeffs/" + key;
        std::size_t k = dim;
        auto named = std::find(basis.begin(), basis.end(), key);
        if (named != basis.end()) {
          k = static_cast<std::size_t>(named - basis.begin());
        } else {
          try {
            std::size_t used = 0;
            const unsigned long parsed = std::stoul(key, &used);
            if (used == key.size()) k = parsed;
          } catch (const std::exception&) {
          }
        }
        if (k >= dim) fail_at(source, cw, "key is neither a basis name nor an index below dim");
        e.coeffs.emplace_back(k, rational_value(value, cw, source));
      }
      entries.push_back(std::move(e));
    }
  }
  try {
    return LieAlgebra::from_brackets(name, basis, entries);
  } catch (const Error& e) {
    fail_at(source, "/brackets", e.what());
  }
}

BilinearForm parse_metric_json(std::string_view text, std::size_t dim, std::string_view source) {
  const Json doc = parse_document(text, source);
  const Json& entries = member(doc, "entries", "/", source);
  if (!entries.is_array()) fail_at(source, "/entries", "expected an array");
  QMatrix gram(dim, dim);
  std::vector<bool> set(dim * dim, false);
  for (std::size_t n = 0; n < entries.size(); ++n) {
    const std::string where = "/entries/" + std::to_string(n);
    const Json& e = entries[n];
    const std::size_t i = index_value(member(e, "i", where, source), where + "/i", source);
    const std::size_t j = index_value(member(e, "j", where, source), where + "/j", source);
    if (i >= dim) fail_at(source, where + "/i", "index out of range for dimension " + std::to_string(dim));
    if (j >= dim) fail_at(source, where + "/j", "index out of range for dimension " + std::to_string(dim));
    const Rational value = rational_value(member(e, "value", where, source), where + "/value", source);
    if (set[i * dim + j] && gram(i, j) != value) fail_at(source, where, "conflicts with an earlier entry");
    gram(i, j) = gram(j, i) = value;
    set[i * dim + j] = set[j * dim + i] = true;
  }
  return BilinearForm(std::move(gram));
}

LieAlgebra load_algebra_file(const std::string& path) {
  LieAlgebra alg = parse_algebra_json(read_file(path), path);
  const Rational jac = jacobi_residual(alg);
  if (jac != 0) throw Error(ErrorKind::InvalidInput, path + ": Jacobi identity fails (residual " + to_string(jac) + ")");
  return alg;
}

BilinearForm load_metric_file(const std::string& path, std::size_t dim) {
  return parse_metric_json(read_file(path), dim, path);
}

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const QVector& v) {
  Json out = Json::array();
  for (const auto& q : v) out.push_back(to_json(q));
  return out;
}

Json to_json(const QMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

Json to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
  return out;
}

Json algebra_to_json(const LieAlgebra& alg) {
  Json out;
  out["name"] = alg.name();
  out["dim"] = alg.dim();
  out["basis"] = alg.basis_names();
  Json brackets = Json::array();
  for (std::size_t i = 0; i < alg.dim(); ++i)
    for (std::size_t j = i + 1; j < alg.dim(); ++j) {
      Json coeffs = Json::object();
      for (std::size_t k = 0; k < alg.dim(); ++k)
        if (alg.structure(i, j, k) != 0) coeffs[std::to_string(k)] = to_json(alg.structure(i, j, k));
      if (!coeffs.empty()) brackets.push_back({{"i", i}, {"j", j}, {"coeffs", coeffs}});
    }
  out["brackets"] = std::move(brackets);
  return out;
}

Json metric_to_json(const BilinearForm& form) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < form.dim(); ++i)
    for (std::size_t j = i; j < form.dim(); ++j)
      if (form.gram()(i, j) != 0) entries.push_back({{"i", i}, {"j", j}, {"value", to_json(form.gram()(i, j))}});
  return Json{{"entries", std::move(entries)}};
}

}  // namespace ealab
