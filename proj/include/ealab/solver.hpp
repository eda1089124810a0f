#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ealab/flow.hpp"
#include "ealab/metric.hpp"

namespace ealab {

enum class DirectionKind { Constant, Radial };
enum class CausalType { Spacelike, Timelike, Null };

const char* to_string(DirectionKind k);
const char* to_string(CausalType c);

struct SolverOptions {
  /// Angular resolution: the deterministic start grid has grid_density^min(dim-1, 2)
  /// points, and roots closer than 10 * pi / grid_density share a cluster.
  std::size_t grid_density = 64;
  double newton_tol = 1e-12;
  /// Seeded Gaussian starts added after the grid.
  std::size_t max_starts = 256;
  std::uint64_t seed = 0;
  int max_iterations = 50;
};

struct SpecialDirection {
  Eigen::VectorXd v;  // unit, first nonzero coordinate positive
  double lambda = 0.0;
  DirectionKind kind = DirectionKind::Constant;
  CausalType causal_type = CausalType::Null;
  std::size_t component_id = 0;
  bool isolated = true;
  double residual = 0.0;  // |F(v) - lambda v|
  /// Dimension of the linear span of the component (1 for an isolated line).
  std::size_t component_dim = 1;
  /// Orthonormal basis of that span, rows in reduced echelon order.
  std::vector<Eigen::VectorXd> basis;
  std::size_t members = 0;  // converged starts that landed in this component
};

/// Lines (and linear families of lines) through the origin on which the flow is
/// constant or radial. Coverage is limited by the start grid; roots between grid
/// points can be missed.
std::vector<SpecialDirection> find_special_directions(const MetricAlgebra& ma, const SolverOptions& opts = {});

/// Flips u so that its first coordinate with |u_i| > tol is positive.
Eigen::VectorXd sign_normalize(const Eigen::VectorXd& u, double tol = 1e-12);
/// min(|u - v|, |u + v|).
double projective_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Sign of q(v, v), with |q(v, v)| <= 1e-9 |v|^2 counted as null. Throws InvalidInput for v = 0.
CausalType causal_type(const MetricAlgebra& ma, const Eigen::VectorXd& v);

// ---------------------------------------------------------------------------
// Completeness
// ---------------------------------------------------------------------------

enum class Completeness { Complete, FutureIncomplete, PastIncomplete, BothIncomplete, Undetermined };
const char* to_string(Completeness c);

/// Projection onto a line along a complementary subspace whose sign decides completeness.
struct SigmaCriterion {
  QVector line;
  std::vector<QVector> complement;
};

/// Registered criteria: sl2 (line v0, complement span(e, h)) and sol (line h,
/// complement span(e1, e2)), each only with its default metric.
std::optional<SigmaCriterion> sigma_criterion(const MetricAlgebra& ma);

struct CompletenessOptions {
  double horizon = 1e3;
  double tol = 1e-10;
};

struct CompletenessTag {
  Completeness value = Completeness::Undetermined;
  bool used_sigma = false;
  bool used_integration = false;
  std::optional<double> sigma;
  std::optional<Completeness> sigma_verdict;
  std::optional<Completeness> integration_verdict;
  Trajectory forward;
  Trajectory backward;
  std::string diagnostic;
};

/// Throws InvalidInput for v = 0.
CompletenessTag completeness_classify(const MetricAlgebra& ma, const Eigen::VectorXd& v,
                                      const CompletenessOptions& opts = {});

}  // namespace ealab
