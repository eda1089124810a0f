#include <gtest/gtest.h>

#include <sstream>

#include "ealab/checks.hpp"
#include "ealab/error.hpp"
#include "ealab/json_io.hpp"
#include "ealab/report.hpp"

using namespace ealab;

namespace {

std::string parse_error(std::string_view text) {
  try {
    parse_algebra_json(text, "alg.json");
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Checks, AllPassInOrder) {
  const auto infos = list_checks();
  const auto results = run_checks();
  ASSERT_EQ(results.size(), infos.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    EXPECT_EQ(results[i].id, infos[i].id);
    EXPECT_FALSE(results[i].claim.empty());
    EXPECT_TRUE(results[i].passed) << results[i].id << ": " << results[i].detail;
    EXPECT_EQ(results[i].passed, results[i].residual <= results[i].tolerance) << results[i].id;
  }
}

TEST(Checks, RequiredIdsRegistered) {
  std::vector<std::string> ids;
  for (const auto& c : list_checks()) ids.push_back(c.id);
  for (const char* id : {"sl2.v0", "sol.adstar", "product.radial", "euc.adstar", "lattice.search"})
    EXPECT_NE(std::find(ids.begin(), ids.end(), id), ids.end()) << id;
}

TEST(Checks, PrefixAndParallel) {
  const auto sol = run_checks("sol.");
  ASSERT_FALSE(sol.empty());
  for (const auto& r : sol) EXPECT_EQ(r.id.rfind("sol.", 0), 0u);
  const auto seq = run_checks("sl2.");
  const auto par = run_checks("sl2.", true);
  ASSERT_EQ(seq.size(), par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    EXPECT_EQ(seq[i].id, par[i].id);
    EXPECT_EQ(seq[i].residual, par[i].residual);
  }
  EXPECT_TRUE(run_checks("zzz").empty());
}

TEST(Checks, DiskSamplesCoverFourDisks) {
  const auto samples = sl2_disk_samples(25, 0);
  ASSERT_EQ(samples.size(), 100u);
  std::array<int, 4> count{};
  for (const auto& u : samples) {
    EXPECT_NEAR(u.norm(), 1.0, 1e-12);
    ++count[static_cast<std::size_t>(sl2_disk(u))];
  }
  for (int c : count) EXPECT_EQ(c, 25);
  EXPECT_EQ(sl2_disk_samples(5, 3).front(), sl2_disk_samples(5, 3).front());
}

TEST(JsonIo, ParsesAlgebraWithNamesAndIndices) {
  const LieAlgebra alg = parse_algebra_json(
      R"({"name": "sol", "dim": 3, "basis": ["e1", "e2", "h"],
          "brackets": [{"i": 2, "j": 0, "coeffs": {"e1": "1"}}, {"i": 2, "j": 1, "coeffs": {"1": -1}}]})");
  const LieAlgebra builtin = load_builtin("sol");
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(alg.structure(i, j, k), builtin.structure(i, j, k));
}

TEST(JsonIo, RoundTrip) {
  for (const auto& name : builtin_names()) {
    const LieAlgebra alg = load_builtin(name);
    const LieAlgebra back = parse_algebra_json(algebra_to_json(alg).dump());
    EXPECT_EQ(algebra_to_json(back), algebra_to_json(alg));
    const BilinearForm q = builtin_metric(name);
    EXPECT_EQ(parse_metric_json(metric_to_json(q).dump(), q.dim()), q);
  }
}

TEST(JsonIo, SyntaxErrorsCarryLineAndColumn) {
  EXPECT_NE(parse_error("{\"dim\": 3,\n  \"basis\": [\"a\" \"b\"]}").find("alg.json:2:"), std::string::npos);
  EXPECT_NE(parse_error("{").find("alg.json:1:"), std::string::npos);
}

TEST(JsonIo, SemanticErrorsCarryPointer) {
  EXPECT_NE(parse_error(R"({"basis": []})").find("missing key \"dim\""), std::string::npos);
  EXPECT_NE(parse_error(R"({"dim": 2, "basis": ["a", "a"]})").find("/basis/1"), std::string::npos);
  EXPECT_NE(parse_error(R"({"dim": 2, "basis": ["a", "b"], "brackets": [{"i": 0, "j": 1, "coeffs": {"c": "1"}}]})")
                .find("/brackets/0/coeffs/c"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"dim": 2, "basis": ["a", "b"], "brackets": [{"i": 0, "j": 1, "coeffs": {"a": 0.5}}]})")
                .find("/brackets/0/coeffs/a"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"dim": 2, "basis": ["a", "b"], "brackets": [{"i": 0, "j": 1, "coeffs": {"a": "1/0"}}]})")
                .find("/brackets/0/coeffs/a"),
            std::string::npos);
  EXPECT_THROW(parse_metric_json(R"({"entries": [{"i": 0, "j": 3, "value": "1"}]})", 3), Error);
  EXPECT_THROW(parse_metric_json(R"({"entries": [{"i": 0, "j": 1, "value": "1"}, {"i": 1, "j": 0, "value": "2"}]})", 3),
               Error);
}

TEST(JsonIo, MissingFile) {
  try {
    load_algebra_file("/nonexistent/alg.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotFound);
  }
}

TEST(Report, TrajectoryCsv) {
  const MetricAlgebra ma = load_metric_algebra("sol");
  const Trajectory tr = integrate(ma, Eigen::Vector3d(1, 1, 0), 1.0);
  std::ostringstream os;
  write_trajectory_csv(os, ma, tr);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x_0,x_1,x_2,q_norm");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 4);
  }
  EXPECT_EQ(rows, tr.times.size());
}

TEST(Report, JsonIsStable) {
  const MetricAlgebra ma = load_metric_algebra("sl2");
  EXPECT_EQ(dump(info_json(ma)), dump(info_json(load_metric_algebra("sl2"))));
  const Json field = field_json(ma, QVector{Rational(3, 8), Rational(-1, 2), Rational(1)});
  EXPECT_EQ(field["field"], (Json{"3/8", "-1/2", "1"}));
  EXPECT_EQ(field["q_norm"], "0");
  Json nan_doc = checks_json({CheckResult{"x", "c", false, std::nan(""), 0.0, ""}});
  EXPECT_TRUE(nan_doc["checks"][0]["residual"].is_null());
  EXPECT_FALSE(nan_doc["passed"].get<bool>());
}
