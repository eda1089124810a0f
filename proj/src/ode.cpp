#include "ealab/ode.hpp"

#include <algorithm>
#include <cmath>

namespace ealab::ode {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b_hat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Step dopri5_step(const Field& f, const Eigen::VectorXd& y, const Eigen::VectorXd& f0, double h,
                 double atol, double rtol) {
  const Eigen::VectorXd& k1 = f0;
  Eigen::VectorXd k2 = f(y + h * (a21 * k1));
  Eigen::VectorXd k3 = f(y + h * (a31 * k1 + a32 * k2));
  Eigen::VectorXd k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  Eigen::VectorXd k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  Eigen::VectorXd k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  Step out;
  out.y = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  out.f_end = f(out.y);
  Eigen::VectorXd err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * out.f_end);
  Eigen::ArrayXd scale = atol + rtol * y.cwiseAbs().array().max(out.y.cwiseAbs().array());
  out.error = std::sqrt((err.array() / scale).square().mean());
  if (!std::isfinite(out.error) || !out.y.allFinite()) out.error = INFINITY;
  return out;
}

double next_step_size(double h, double error) {
  double factor = error == 0.0 ? 5.0 : 0.9 * std::pow(error, -0.2);
  factor = std::clamp(factor, 0.2, 5.0);
  return h * factor;
}

double initial_step(const Eigen::VectorXd& y, const Eigen::VectorXd& f0, double limit) {
  const double fn = f0.norm();
  if (fn == 0.0) return limit;
  return std::min(limit, 0.01 * std::max(1.0, y.norm()) / fn);
}

}  // namespace ealab::ode
