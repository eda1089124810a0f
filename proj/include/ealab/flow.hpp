#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ealab/metric.hpp"

namespace ealab {

// ---------------------------------------------------------------------------
// Geodesic (Euler-Arnold) field F(x) = ad*_x x
// ---------------------------------------------------------------------------

QVector geodesic_field(const MetricAlgebra& ma, const QVector& x);
Eigen::VectorXd geodesic_field(const MetricAlgebra& ma, const Eigen::VectorXd& x);
/// dF/dx at x.
Eigen::MatrixXd geodesic_field_jacobian(const MetricAlgebra& ma, const Eigen::VectorXd& x);
/// Symmetric bilinear form of the quadratic field: B(u, w) = (ad*_u w + ad*_w u) / 2, so F(x) = B(x, x).
QVector geodesic_polarization(const MetricAlgebra& ma, const QVector& u, const QVector& w);

// ---------------------------------------------------------------------------
// Integration with blowup detection
// ---------------------------------------------------------------------------

enum class Termination { HorizonReached, BlowupDetected, StepFailure };
const char* to_string(Termination t);

struct IntegrateOptions {
  double tol = 1e-10;                // used as both absolute and relative tolerance
  double blowup_threshold = 1e8;     // Euclidean norm
  double step_floor = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 2'000'000;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  Termination termination = Termination::HorizonReached;
  /// Only set for BlowupDetected: zero of the linear extrapolation of 1/|x(t)|.
  std::optional<double> blowup_time;
  /// max_k |q(x_k, x_k) - q(x_0, x_0)| / max(1, |x_k|^2) over stored samples.
  double energy_drift = 0.0;
  std::size_t rejected_steps = 0;
  std::string diagnostic;
};

/// Integrates x' = F(x) from x0 over [0, horizon] (horizon < 0 integrates
/// backward) with an adaptive Dormand-Prince 5(4) pair.
///
/// Blowup is declared when the accepted step would have to drop below
/// `step_floor` while |x| exceeds `blowup_threshold`; the same collapse at a
/// moderate norm ends the run with StepFailure.
Trajectory integrate(const MetricAlgebra& ma, const Eigen::VectorXd& x0, double horizon,
                     const IntegrateOptions& opts = {});

// ---------------------------------------------------------------------------
// Spherized flow
// ---------------------------------------------------------------------------

/// Tangential part G(u) = F(u) - (F(u).u) u on the Euclidean unit sphere.
/// Throws InvalidInput unless | |u| - 1 | <= 1e-8.
Eigen::VectorXd sphere_field(const MetricAlgebra& ma, const Eigen::VectorXd& u);

struct SphereRoot {
  Eigen::VectorXd u;
  double residual = 0.0;  // |G(u)|
  int iterations = 0;
  bool converged = false;
};

/// Projected Gauss-Newton for G(u) = 0 on the unit sphere. Steps use the
/// minimum-norm solution in the tangent space, so roots lying on continua
/// converge as well as isolated ones.
SphereRoot newton_on_sphere(const MetricAlgebra& ma, const Eigen::VectorXd& start, double tol = 1e-12,
                            int max_iterations = 50);

/// Deterministic near-uniform point set on the unit sphere of R^dim: a
/// Fibonacci lattice for dim = 3, Halton points of the cube projected radially otherwise.
std::vector<Eigen::VectorXd> sphere_grid(std::size_t dim, std::size_t count);

/// Zeros of G on the sphere (half-lines, so u and -u are distinct), found by
/// Newton from every point of a `grid_points` sphere grid and merged within the grid spacing.
std::vector<Eigen::VectorXd> sphere_fixed_points(const MetricAlgebra& ma, std::size_t grid_points,
                                                 double eps_fix = 1e-9);

enum class OrbitKind { FixedPoint, ConvergesToFixedPoint, ClosedOrbit, Unresolved };
const char* to_string(OrbitKind k);

struct OrbitOptions {
  double horizon = 1e5;
  double tol = 1e-10;
  double eps_fix = 1e-9;
  double eps_closed = 1e-6;
  double min_period = 1e-3;
  double max_return_angle_deg = 30.0;
  double approach_radius = 1e-2;
  std::size_t max_steps = 200'000;
  std::size_t keep_samples = 0;  // thinned path samples kept for plotting; 0 keeps none
  /// Known fixed points of the spherized flow; computed on a 2000-point grid when empty.
  std::vector<Eigen::VectorXd> fixed_points;
};

struct OrbitClass {
  OrbitKind kind = OrbitKind::Unresolved;
  std::optional<std::size_t> target;       // index into the fixed-point list (forward limit)
  std::optional<std::size_t> past_target;  // same, for the backward run
  std::optional<double> period;
  double min_return_distance = std::numeric_limits<double>::infinity();
  double final_distance = std::numeric_limits<double>::infinity();  // to the nearest fixed point
  double integrated_time = 0.0;
  std::vector<Eigen::VectorXd> samples;
};

OrbitClass classify_sphere_orbit(const MetricAlgebra& ma, const Eigen::VectorXd& u0,
                                 const OrbitOptions& opts = {});
/// Batch form; runs across worker threads, results in input order.
std::vector<OrbitClass> classify_sphere_orbits(const MetricAlgebra& ma,
                                               std::span<const Eigen::VectorXd> starts,
                                               const OrbitOptions& opts = {});

// ---------------------------------------------------------------------------
// Exact invariance checks
// ---------------------------------------------------------------------------

/// Max squared Euclidean distance from span(S) of B(s_a, s_b) over all pairs of
/// spanning vectors. Zero exactly when span(S) is invariant under the flow.
/// Throws InvalidInput for a dependent spanning set.
Rational subspace_invariance_residual(const MetricAlgebra& ma, const std::vector<QVector>& span_vectors);

/// Projection sigma onto `line` along span(complement). Returns the max squared
/// norm of the coefficients of the quadratic polynomial sigma(F(v)) - F(sigma(v));
/// zero exactly when sigma is equivariant. Throws InvalidInput unless
/// complement + line is a basis.
Rational projection_equivariance_residual(const MetricAlgebra& ma, const QVector& line,
                                          const std::vector<QVector>& complement);

/// sigma coordinate of v: the `line` coefficient of v in the basis complement + line.
Rational projection_coordinate(const QVector& v, const QVector& line, const std::vector<QVector>& complement);

// ---------------------------------------------------------------------------
// Group curves
// ---------------------------------------------------------------------------

/// Matrix images of the basis vectors.
using Realization = std::vector<QMatrix>;

/// sl2 as trace-free 2x2 matrices; sol and euc as 3x3 affine matrices; sol_euc block diagonal.
Realization builtin_realization(std::string_view name);
/// Max |[R_i, R_j] - sum_k c_ijk R_k| over basis pairs; zero for a homomorphism.
Rational realization_residual(const LieAlgebra& alg, const Realization& r);

struct GroupCurve {
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> elements;
  /// Max relative mismatch between log(g_k^-1 g_{k+1}) / h and the realized
  /// state at the midpoint, over sub-intervals short enough for the principal log.
  double log_derivative_residual = 0.0;
  /// Max relative mismatch between the re-integrated and the stored states.
  double state_residual = 0.0;
};

/// Solves g' = g X(t), g(0) = I, where X(t) is the realized trajectory state.
/// Throws InvalidRealization when `realization` is not a Lie algebra homomorphism
/// and InvalidInput for an empty trajectory.
GroupCurve reconstruct_group_curve(const MetricAlgebra& ma, const Realization& realization,
                                   const Trajectory& traj, double tol = 1e-11);

Eigen::MatrixXd realize(const Realization& r, const Eigen::VectorXd& x);

}  // namespace ealab
