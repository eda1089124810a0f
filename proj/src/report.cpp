#include "ealab/report.hpp"

#include <cmath>
#include <cstdio>

namespace ealab {

namespace {

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

template <class T>
Json optional_number(const std::optional<T>& x) {
  return x ? number(static_cast<double>(*x)) : Json(nullptr);
}

Json vec(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

Json mat(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vec(m.row(i).transpose()));
  return out;
}

Json header(const MetricAlgebra& ma) { return {{"algebra", ma.algebra().name()}, {"metric", ma.metric_name()}}; }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json info_json(const MetricAlgebra& ma) {
  Json out = algebra_to_json(ma.algebra());
  out["jacobi_residual"] = to_json(jacobi_residual(ma.algebra()));
  out["killing_form"] = to_json(killing_form(ma.algebra()));
  const Inertia in = inertia(ma.form());
  out["metric"] = {{"name", ma.metric_name()},
                   {"gram", to_json(ma.form().gram())},
                   {"inertia", {{"positive", in.positive}, {"negative", in.negative}, {"zero", in.zero}}},
                   {"biinvariance_residual", to_json(biinvariance_residual(ma))}};
  return out;
}

Json adstar_json(const MetricAlgebra& ma) {
  Json out = header(ma);
  Json rows = Json::array();
  for (std::size_t i = 0; i < ma.dim(); ++i)
    rows.push_back({{"basis", ma.algebra().basis_names()[i]}, {"ad", to_json(ma.ad(i))}, {"adstar", to_json(ma.adstar(i))}});
  out["operators"] = std::move(rows);
  return out;
}

Json field_json(const MetricAlgebra& ma, const QVector& x) {
  Json out = header(ma);
  out["at"] = to_json(x);
  out["field"] = to_json(geodesic_field(ma, x));
  out["q_norm"] = to_json(ma.form()(x, x));
  return out;
}

Json trajectory_meta_json(const MetricAlgebra& ma, const Eigen::VectorXd& x0, double horizon,
                          const IntegrateOptions& opts, const Trajectory& traj) {
  Json out = header(ma);
  out["x0"] = vec(x0);
  out["horizon"] = number(horizon);
  out["tol"] = number(opts.tol);
  out["termination"] = to_string(traj.termination);
  out["blowup_time"] = optional_number(traj.blowup_time);
  out["final_time"] = traj.times.empty() ? Json(nullptr) : number(traj.times.back());
  out["energy_drift"] = number(traj.energy_drift);
  out["samples"] = traj.times.size();
  out["rejected_steps"] = traj.rejected_steps;
  out["diagnostic"] = traj.diagnostic;
  return out;
}

Json radial_json(const std::vector<SpecialDirection>& dirs) {
  Json out = Json::array();
  for (const auto& d : dirs) {
    Json basis = Json::array();
    for (const auto& b : d.basis) basis.push_back(vec(b));
    out.push_back({{"v", vec(d.v)},
                   {"lambda", number(d.lambda)},
                   {"kind", to_string(d.kind)},
                   {"causal_type", to_string(d.causal_type)},
                   {"isolated", d.isolated},
                   {"residual", number(d.residual)},
                   {"component_id", d.component_id},
                   {"component_dim", d.component_dim},
                   {"basis", std::move(basis)},
                   {"members", d.members}});
  }
  return out;
}

Json portrait_json(const std::vector<Eigen::VectorXd>& starts, const std::vector<OrbitClass>& orbits,
                   const std::vector<Eigen::VectorXd>& fixed_points) {
  auto point = [&](const std::optional<std::size_t>& idx) {
    return idx ? vec(fixed_points[*idx]) : Json(nullptr);
  };
  Json out = Json::array();
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    const OrbitClass& o = orbits[i];
    Json samples = Json::array();
    for (const auto& s : o.samples) samples.push_back(vec(s));
    out.push_back({{"initial", vec(starts[i])},
                   {"samples", std::move(samples)},
                   {"verdict",
                    {{"kind", to_string(o.kind)},
                     {"target", point(o.target)},
                     {"past_target", point(o.past_target)},
                     {"period", optional_number(o.period)},
                     {"min_return_distance", number(o.min_return_distance)},
                     {"final_distance", number(o.final_distance)},
                     {"integrated_time", number(o.integrated_time)}}}});
  }
  return out;
}

Json completeness_json(const MetricAlgebra& ma, const Eigen::VectorXd& v, const CompletenessTag& tag) {
  Json out = header(ma);
  out["v"] = vec(v);
  out["value"] = to_string(tag.value);
  Json methods = Json::array();
  if (tag.used_sigma) methods.push_back("SigmaCriterion");
  if (tag.used_integration) methods.push_back("Integration");
  out["methods"] = std::move(methods);
  out["sigma"] = optional_number(tag.sigma);
  out["sigma_verdict"] = tag.sigma_verdict ? Json(to_string(*tag.sigma_verdict)) : Json(nullptr);
  out["integration_verdict"] = tag.integration_verdict ? Json(to_string(*tag.integration_verdict)) : Json(nullptr);
  auto run = [](const Trajectory& t) {
    return Json{{"termination", to_string(t.termination)},
                {"blowup_time", optional_number(t.blowup_time)},
                {"final_time", t.times.empty() ? Json(nullptr) : number(t.times.back())},
                {"energy_drift", number(t.energy_drift)}};
  };
  out["forward"] = run(tag.forward);
  out["backward"] = run(tag.backward);
  out["diagnostic"] = tag.diagnostic;
  return out;
}

Json checks_json(const std::vector<CheckResult>& results) {
  std::size_t failed = 0;
  Json rows = Json::array();
  for (const auto& r : results) {
    if (!r.passed) ++failed;
    rows.push_back({{"check_id", r.id},
                    {"claim", r.claim},
                    {"status", r.passed ? "pass" : "fail"},
                    {"residual", number(r.residual)},
                    {"tolerance", number(r.tolerance)},
                    {"detail", r.detail}});
  }
  return {{"total", results.size()}, {"failed", failed}, {"passed", failed == 0}, {"checks", std::move(rows)}};
}

Json lattice_json(std::int64_t bound, const std::vector<LoxodromicCertificate>& certs,
                  const std::vector<LatticeData>& lattices) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < certs.size(); ++i) {
    const auto& c = certs[i];
    Json companion = Json::array();
    for (const auto& r : c.companion) companion.push_back(Json(r));
    rows.push_back({{"a", c.quartic.a},
                    {"b", c.quartic.b},
                    {"lambda", number(c.lambda)},
                    {"alpha", number(c.alpha)},
                    {"companion", std::move(companion)},
                    {"companion_det", c.companion_det},
                    {"S", mat(c.s)},
                    {"S_inv", mat(c.s_inv)},
                    {"residual", number(c.residual)},
                    {"lattice_residual", number(lattices[i].residual)}});
  }
  return {{"bound", bound}, {"count", certs.size()}, {"candidates", std::move(rows)}};
}

void write_trajectory_csv(std::ostream& os, const MetricAlgebra& ma, const Trajectory& traj) {
  const std::size_t n = ma.dim();
  os << "t";
  for (std::size_t i = 0; i < n; ++i) os << ",x_" << i;
  os << ",q_norm\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const Eigen::VectorXd& x = traj.states[k];
    os << fmt(traj.times[k]);
    for (Eigen::Index i = 0; i < x.size(); ++i) os << ',' << fmt(x(i));
    os << ',' << fmt(ma.form()(x, x)) << '\n';
  }
}

}  // namespace ealab
