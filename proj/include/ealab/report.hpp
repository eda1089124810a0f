#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ealab/checks.hpp"
#include "ealab/flow.hpp"
#include "ealab/json_io.hpp"
#include "ealab/lattice.hpp"
#include "ealab/solver.hpp"

namespace ealab {

/// Deterministic JSON documents for each CLI output. Floats are written in
/// shortest round-trip form; non-finite values become null.

Json info_json(const MetricAlgebra& ma);
Json adstar_json(const MetricAlgebra& ma);
Json field_json(const MetricAlgebra& ma, const QVector& x);
Json trajectory_meta_json(const MetricAlgebra& ma, const Eigen::VectorXd& x0, double horizon,
                          const IntegrateOptions& opts, const Trajectory& traj);
Json radial_json(const std::vector<SpecialDirection>& dirs);
Json portrait_json(const std::vector<Eigen::VectorXd>& starts, const std::vector<OrbitClass>& orbits,
                   const std::vector<Eigen::VectorXd>& fixed_points);
Json completeness_json(const MetricAlgebra& ma, const Eigen::VectorXd& v, const CompletenessTag& tag);
Json checks_json(const std::vector<CheckResult>& results);
Json lattice_json(std::int64_t bound, const std::vector<LoxodromicCertificate>& certs,
                  const std::vector<LatticeData>& lattices);

/// Pretty-printed with two-space indent and a trailing newline.
std::string dump(const Json& j);

/// Header t,x_0,...,x_{n-1},q_norm; q_norm is q(x, x). Values use 17 significant digits.
void write_trajectory_csv(std::ostream& os, const MetricAlgebra& ma, const Trajectory& traj);

}  // namespace ealab
