#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ealab {

struct CheckResult {
  std::string id;
  std::string claim;
  bool passed = false;
  /// Exact checks report the rational residual converted to double with tolerance 0.
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct CheckInfo {
  std::string id;
  std::string claim;
};

/// Registered checks in execution order.
std::vector<CheckInfo> list_checks();

/// Runs every check whose id starts with `prefix`, in registration order.
/// Failures (including exceptions inside a check) are recorded, never thrown.
/// With `parallel`, checks run concurrently but the report keeps registration order.
std::vector<CheckResult> run_checks(std::string_view prefix = "", bool parallel = false);

/// Seeded unit vectors of sl2, `per_disk` in each of the four open disks cut out
/// of the sphere by the circle of span(e, h) and the two circles of the null cone.
/// Points within 1e-2 of a boundary (in |q(u,u)| or |f-coordinate|) are skipped.
std::vector<Eigen::VectorXd> sl2_disk_samples(std::size_t per_disk, std::uint64_t seed);
/// Disk index in [0, 4): 2 * (q(u,u) < 0) + (f-coordinate < 0).
int sl2_disk(const Eigen::VectorXd& u);

}  // namespace ealab
