#pragma once

#include <functional>

#include <Eigen/Dense>

namespace ealab::ode {

/// Autonomous right-hand side y' = f(y).
using Field = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct Step {
  Eigen::VectorXd y;      // 5th-order solution
  Eigen::VectorXd f_end;  // f(y), reused as the first stage of the next step
  double error = 0.0;     // RMS of the embedded error estimate, scaled by atol + rtol*|y|
};

/// One Dormand-Prince 5(4) step of (signed) size h from y with f0 = f(y).
Step dopri5_step(const Field& f, const Eigen::VectorXd& y, const Eigen::VectorXd& f0, double h,
                 double atol, double rtol);

/// Standard step-size update for an order-5 pair: safety 0.9, growth clamped to [0.2, 5].
double next_step_size(double h, double error);

/// Initial step guess from the scale of y and f(y); capped by `limit`.
double initial_step(const Eigen::VectorXd& y, const Eigen::VectorXd& f0, double limit);

}  // namespace ealab::ode
