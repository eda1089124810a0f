#include "ealab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "ealab/error.hpp"
#include "ealab/ode.hpp"
#include "ealab/parallel.hpp"

namespace ealab {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::HorizonReached: return "HorizonReached";
    case Termination::BlowupDetected: return "BlowupDetected";
    case Termination::StepFailure: return "StepFailure";
  }
  return "Unknown";
}

const char* to_string(OrbitKind k) {
  switch (k) {
    case OrbitKind::FixedPoint: return "FixedPoint";
    case OrbitKind::ConvergesToFixedPoint: return "ConvergesToFixedPoint";
    case OrbitKind::ClosedOrbit: return "ClosedOrbit";
    case OrbitKind::Unresolved: return "Unresolved";
  }
  return "Unknown";
}

QVector geodesic_field(const MetricAlgebra& ma, const QVector& x) {
  return adstar_matrix(ma, x) * x;
}

Eigen::VectorXd geodesic_field(const MetricAlgebra& ma, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != ma.dim())
    throw Error(ErrorKind::InvalidInput, "geodesic_field: length mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) != 0.0) out.noalias() += x(i) * (ma.adstar_d(static_cast<std::size_t>(i)) * x);
  }
  return out;
}

Eigen::MatrixXd geodesic_field_jacobian(const MetricAlgebra& ma, const Eigen::VectorXd& x) {
  const auto n = x.size();
  Eigen::MatrixXd j = adstar_matrix(ma, x);
  for (Eigen::Index m = 0; m < n; ++m) j.col(m) += ma.adstar_d(static_cast<std::size_t>(m)) * x;
  return j;
}

QVector geodesic_polarization(const MetricAlgebra& ma, const QVector& u, const QVector& w) {
  QVector s = adstar_matrix(ma, u) * w + adstar_matrix(ma, w) * u;
  return Rational(1, 2) * s;
}

// ---------------------------------------------------------------------------

Trajectory integrate(const MetricAlgebra& ma, const Eigen::VectorXd& x0, double horizon,
                     const IntegrateOptions& opts) {
  if (static_cast<std::size_t>(x0.size()) != ma.dim())
    throw Error(ErrorKind::InvalidInput, "integrate: initial state has wrong length");
  if (!std::isfinite(horizon) || horizon == 0.0)
    throw Error(ErrorKind::InvalidInput, "integrate: horizon must be finite and nonzero");
  if (!(opts.tol > 0.0)) throw Error(ErrorKind::InvalidInput, "integrate: tol must be positive");

  const ode::Field field = [&ma](const Eigen::VectorXd& x) { return geodesic_field(ma, x); };
  const double dir = horizon > 0 ? 1.0 : -1.0;
  const double span = std::abs(horizon);
  const Eigen::MatrixXd& q = ma.gram_d();
  const double q0 = x0.dot(q * x0);

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(x0);

  Eigen::VectorXd x = x0;
  Eigen::VectorXd fx = field(x);
  double elapsed = 0.0;
  double h = ode::initial_step(x, fx, std::min(span, opts.max_step));
  std::size_t steps = 0;

  while (span - elapsed > 0.0) {
    const double remaining = span - elapsed;
    h = std::min({h, remaining, opts.max_step});
    if (h < opts.step_floor && remaining > opts.step_floor) {
      const double norm = x.norm();
      if (norm > opts.blowup_threshold && traj.states.size() >= 2) {
        traj.termination = Termination::BlowupDetected;
        const std::size_t k = traj.states.size() - 1;
        const double r1 = 1.0 / traj.states[k].norm();
        const double r0 = 1.0 / traj.states[k - 1].norm();
        const double t1 = traj.times[k], t0 = traj.times[k - 1];
        traj.blowup_time = (r0 == r1) ? t1 : t1 + r1 * (t1 - t0) / (r0 - r1);
        traj.diagnostic = "step size collapsed at |x| = " + std::to_string(norm);
      } else {
        traj.termination = Termination::StepFailure;
        traj.diagnostic = "step size fell below floor at moderate |x| = " + std::to_string(norm);
      }
      break;
    }
    if (steps >= opts.max_steps) {
      traj.termination = Termination::StepFailure;
      traj.diagnostic = "step budget exhausted";
      break;
    }
    ++steps;
    ode::Step s = ode::dopri5_step(field, x, fx, dir * h, opts.tol, opts.tol);
    if (s.error <= 1.0) {
      // Snap the last step onto the horizon so the final time is exact.
      elapsed = (h >= remaining) ? span : elapsed + h;
      x = std::move(s.y);
      fx = std::move(s.f_end);
      traj.times.push_back(dir * elapsed);
      traj.states.push_back(x);
      const double drift = std::abs(x.dot(q * x) - q0) / std::max(1.0, x.squaredNorm());
      traj.energy_drift = std::max(traj.energy_drift, drift);
    } else {
      ++traj.rejected_steps;
    }
    h = ode::next_step_size(h, std::isfinite(s.error) ? s.error : 1e10);
  }
  return traj;
}

// ---------------------------------------------------------------------------

namespace {

Eigen::VectorXd projected_field(const MetricAlgebra& ma, const Eigen::VectorXd& u) {
  Eigen::VectorXd f = geodesic_field(ma, u);
  return f - (f.dot(u) / u.squaredNorm()) * u;
}

// Orthonormal basis of the orthogonal complement of u (columns).
Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& u) {
  const auto n = u.size();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(u);
  Eigen::MatrixXd qfull = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return qfull.rightCols(n - 1);
}

double sphere_area(std::size_t dim) {
  const double d = static_cast<double>(dim);
  return 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
}

double halton(std::size_t index, unsigned base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

Eigen::VectorXd sphere_field(const MetricAlgebra& ma, const Eigen::VectorXd& u) {
  if (static_cast<std::size_t>(u.size()) != ma.dim())
    throw Error(ErrorKind::InvalidInput, "sphere_field: length mismatch");
  if (std::abs(u.norm() - 1.0) > 1e-8)
    throw Error(ErrorKind::InvalidInput, "sphere_field: input is not a unit vector");
  Eigen::VectorXd f = geodesic_field(ma, u);
  return f - f.dot(u) * u;
}

SphereRoot newton_on_sphere(const MetricAlgebra& ma, const Eigen::VectorXd& start, double tol,
                            int max_iterations) {
  const auto n = start.size();
  SphereRoot out;
  Eigen::VectorXd u = start.normalized();
  for (int it = 0;; ++it) {
    const Eigen::VectorXd f = geodesic_field(ma, u);
    const double lambda = f.dot(u);
    const Eigen::VectorXd g = f - lambda * u;
    out.u = u;
    out.residual = g.norm();
    out.iterations = it;
    if (it >= max_iterations || out.residual == 0.0) break;

    const Eigen::MatrixXd jf = geodesic_field_jacobian(ma, u);
    const Eigen::MatrixXd t = tangent_basis(u);
    const Eigen::MatrixXd m = t.transpose() * (jf - lambda * Eigen::MatrixXd::Identity(n, n)) * t;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-9);
    Eigen::VectorXd step = t * svd.solve(-t.transpose() * g);
    const double len = step.norm();
    if (!std::isfinite(len)) break;
    if (len > 0.5) step *= 0.5 / len;
    u = (u + step).normalized();
    if (out.residual < tol && len < 1e-10) break;
  }
  out.converged = out.residual < tol;
  return out;
}

std::vector<Eigen::VectorXd> sphere_grid(std::size_t dim, std::size_t count) {
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(count);
  if (dim == 0 || count == 0) return pts;
  if (dim == 1) {
    for (std::size_t i = 0; i < count; ++i) pts.push_back(Eigen::VectorXd::Constant(1, i % 2 == 0 ? 1.0 : -1.0));
    return pts;
  }
  if (dim == 2) {
    for (std::size_t i = 0; i < count; ++i) {
      const double a = 2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
      Eigen::VectorXd p(2);
      p << std::cos(a), std::sin(a);
      pts.push_back(p);
    }
    return pts;
  }
  if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(i);
      Eigen::VectorXd p(3);
      p << r * std::cos(phi), r * std::sin(phi), z;
      pts.push_back(p);
    }
    return pts;
  }
  for (std::size_t idx = 1; pts.size() < count; ++idx) {
    Eigen::VectorXd p(static_cast<Eigen::Index>(dim));
    for (std::size_t d = 0; d < dim; ++d) p(static_cast<Eigen::Index>(d)) = 2.0 * halton(idx, kPrimes[d]) - 1.0;
    const double norm = p.norm();
    if (norm < 1e-3 || norm > 1.0) continue;  // keep the ball so the radial projection stays even
    pts.push_back(p / norm);
  }
  return pts;
}

std::vector<Eigen::VectorXd> sphere_fixed_points(const MetricAlgebra& ma, std::size_t grid_points,
                                                 double eps_fix) {
  const std::vector<Eigen::VectorXd> grid = sphere_grid(ma.dim(), grid_points);
  std::vector<SphereRoot> roots(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { roots[i] = newton_on_sphere(ma, grid[i]); });

  const double d = static_cast<double>(ma.dim());
  const double spacing = std::pow(sphere_area(ma.dim()) / static_cast<double>(std::max<std::size_t>(1, grid.size())),
                                  1.0 / std::max(1.0, d - 1.0));
  std::vector<SphereRoot> reps;
  for (const SphereRoot& r : roots) {
    if (r.residual >= eps_fix) continue;
    auto it = std::find_if(reps.begin(), reps.end(),
                           [&](const SphereRoot& rep) { return (rep.u - r.u).norm() < spacing; });
    if (it == reps.end()) {
      reps.push_back(r);
    } else if (r.residual < it->residual) {
      *it = r;
    }
  }
  std::vector<Eigen::VectorXd> out;
  out.reserve(reps.size());
  for (const auto& r : reps) out.push_back(r.u);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct SphereRun {
  bool closed = false;
  double period = 0.0;
  double min_return = std::numeric_limits<double>::infinity();
  Eigen::VectorXd end;
  double time = 0.0;
  std::vector<Eigen::VectorXd> path;
};

std::pair<std::size_t, double> nearest(const std::vector<Eigen::VectorXd>& pts, const Eigen::VectorXd& u) {
  std::size_t best = 0;
  double dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = (pts[i] - u).norm();
    if (d < dist) {
      dist = d;
      best = i;
    }
  }
  return {best, dist};
}

SphereRun run_sphere_flow(const MetricAlgebra& ma, const Eigen::VectorXd& u0, double dir,
                          const OrbitOptions& opts, const std::vector<Eigen::VectorXd>& fixed,
                          bool detect_closed) {
  const ode::Field field = [&ma, dir](const Eigen::VectorXd& u) -> Eigen::VectorXd { return dir * projected_field(ma, u); };
  SphereRun run;
  const Eigen::VectorXd g0 = field(u0);
  const Eigen::VectorXd normal = g0.normalized();
  const double cos_max = std::cos(opts.max_return_angle_deg * std::numbers::pi / 180.0);
  const bool near_fixed = !fixed.empty() && nearest(fixed, u0).second < 10.0 * opts.eps_closed;
  const bool keep = opts.keep_samples > 0;

  Eigen::VectorXd u = u0;
  Eigen::VectorXd fu = g0;
  double t = 0.0;
  double h = ode::initial_step(u, fu, 0.1);
  double s_prev = 0.0;
  if (keep) run.path.push_back(u);

  for (std::size_t steps = 0; steps < opts.max_steps && t < opts.horizon; ++steps) {
    h = std::min(h, opts.horizon - t);
    ode::Step s = ode::dopri5_step(field, u, fu, h, opts.tol, opts.tol);
    if (s.error > 1.0) {
      h = ode::next_step_size(h, std::isfinite(s.error) ? s.error : 1e10);
      if (h < 1e-14) break;
      continue;
    }
    Eigen::VectorXd next = s.y.normalized();
    Eigen::VectorXd f_next = field(next);
    const double s_new = normal.dot(next - u0);

    if (detect_closed && s_prev < 0.0 && s_new >= 0.0 && t + h >= opts.min_period) {
      // Locate the section crossing by regula falsi (Illinois) on the sub-step length.
      auto section = [&](double tau, Eigen::VectorXd& at) {
        at = ode::dopri5_step(field, u, fu, tau, opts.tol, opts.tol).y.normalized();
        return normal.dot(at - u0);
      };
      double lo = 0.0, hi = h, s_lo = s_prev, s_hi = s_new;
      Eigen::VectorXd cross = next;
      double tau = hi;
      int side = 0;
      for (int it = 0; it < 60 && hi - lo > 1e-15 * std::max(1.0, h); ++it) {
        tau = (lo * s_hi - hi * s_lo) / (s_hi - s_lo);
        const double sv = section(tau, cross);
        if (std::abs(sv) < 1e-15) break;
        if (sv < 0.0) {
          lo = tau;
          s_lo = sv;
          if (side == -1) s_hi *= 0.5;
          side = -1;
        } else {
          hi = tau;
          s_hi = sv;
          if (side == 1) s_lo *= 0.5;
          side = 1;
        }
      }
      const double d = (cross - u0).norm();
      run.min_return = std::min(run.min_return, d);
      if (d < opts.eps_closed && !near_fixed) {
        const Eigen::VectorXd gc = field(cross);
        const double cosang = gc.dot(g0) / (gc.norm() * g0.norm());
        if (cosang >= cos_max) {
          run.closed = true;
          run.period = t + tau;
          run.end = cross;
          run.time = t + tau;
          if (keep) run.path.push_back(cross);
          return run;
        }
      }
    }
    s_prev = s_new;
    t += h;
    u = std::move(next);
    fu = std::move(f_next);
    if (keep) run.path.push_back(u);
    h = ode::next_step_size(h, s.error);
    if (!fixed.empty() && nearest(fixed, u).second < 1e-7) break;
  }
  run.end = u;
  run.time = t;
  return run;
}

std::vector<Eigen::VectorXd> thin(const std::vector<Eigen::VectorXd>& path, std::size_t keep) {
  if (path.size() <= keep) return path;
  std::vector<Eigen::VectorXd> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    const std::size_t idx = (keep == 1) ? 0 : i * (path.size() - 1) / (keep - 1);
    out.push_back(path[idx]);
  }
  return out;
}

}  // namespace

OrbitClass classify_sphere_orbit(const MetricAlgebra& ma, const Eigen::VectorXd& u0,
                                 const OrbitOptions& opts) {
  const Eigen::VectorXd g0 = sphere_field(ma, u0);
  const std::vector<Eigen::VectorXd> fixed =
      opts.fixed_points.empty() ? sphere_fixed_points(ma, 2000, opts.eps_fix) : opts.fixed_points;

  OrbitClass out;
  if (g0.norm() < opts.eps_fix) {
    out.kind = OrbitKind::FixedPoint;
    if (!fixed.empty()) {
      auto [idx, dist] = nearest(fixed, u0);
      out.final_distance = dist;
      if (dist < opts.approach_radius) out.target = idx;
    }
    if (opts.keep_samples > 0) out.samples.push_back(u0);
    return out;
  }

  SphereRun fwd = run_sphere_flow(ma, u0, 1.0, opts, fixed, true);
  out.min_return_distance = fwd.min_return;
  out.integrated_time = fwd.time;
  if (opts.keep_samples > 0) out.samples = thin(fwd.path, opts.keep_samples);
  if (fwd.closed) {
    out.kind = OrbitKind::ClosedOrbit;
    out.period = fwd.period;
    return out;
  }
  if (!fixed.empty()) {
    auto [idx, dist] = nearest(fixed, fwd.end);
    out.final_distance = dist;
    if (dist < opts.approach_radius) {
      out.kind = OrbitKind::ConvergesToFixedPoint;
      out.target = idx;
    }
    SphereRun bwd = run_sphere_flow(ma, u0, -1.0, opts, fixed, false);
    auto [pidx, pdist] = nearest(fixed, bwd.end);
    if (pdist < opts.approach_radius) out.past_target = pidx;
  }
  return out;
}

std::vector<OrbitClass> classify_sphere_orbits(const MetricAlgebra& ma,
                                               std::span<const Eigen::VectorXd> starts,
                                               const OrbitOptions& opts) {
  OrbitOptions shared = opts;
  if (shared.fixed_points.empty()) shared.fixed_points = sphere_fixed_points(ma, 2000, opts.eps_fix);
  std::vector<OrbitClass> out(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) { out[i] = classify_sphere_orbit(ma, starts[i], shared); });
  return out;
}

// ---------------------------------------------------------------------------

Rational subspace_invariance_residual(const MetricAlgebra& ma, const std::vector<QVector>& span_vectors) {
  if (span_vectors.empty()) throw Error(ErrorKind::InvalidInput, "empty spanning set");
  for (const auto& v : span_vectors)
    if (v.size() != ma.dim()) throw Error(ErrorKind::InvalidInput, "spanning vector has wrong length");
  const QMatrix s = from_columns(span_vectors);
  if (rank(s) != span_vectors.size()) throw Error(ErrorKind::InvalidInput, "spanning set is linearly dependent");
  const QMatrix st = s.transpose();
  const QMatrix projector = s * inverse(st * s) * st;

  Rational worst = 0;
  for (std::size_t a = 0; a < span_vectors.size(); ++a)
    for (std::size_t b = a; b < span_vectors.size(); ++b) {
      const QVector v = geodesic_polarization(ma, span_vectors[a], span_vectors[b]);
      const QVector r = v - projector * v;
      worst = std::max(worst, dot(r, r));
    }
  return worst;
}

namespace {

QMatrix projection_basis(std::size_t dim, const QVector& line, const std::vector<QVector>& complement) {
  std::vector<QVector> cols = complement;
  cols.push_back(line);
  for (const auto& v : cols)
    if (v.size() != dim) throw Error(ErrorKind::InvalidInput, "projection vector has wrong length");
  if (cols.size() != dim) throw Error(ErrorKind::InvalidInput, "line + complement must have dim vectors");
  QMatrix m = from_columns(cols);
  if (rank(m) != dim) throw Error(ErrorKind::InvalidInput, "line + complement is not a basis");
  return m;
}

}  // namespace

Rational projection_coordinate(const QVector& v, const QVector& line, const std::vector<QVector>& complement) {
  const QMatrix m = projection_basis(v.size(), line, complement);
  return solve(m, v).back();
}

Rational projection_equivariance_residual(const MetricAlgebra& ma, const QVector& line,
                                          const std::vector<QVector>& complement) {
  const std::size_t n = ma.dim();
  const QMatrix basis = projection_basis(n, line, complement);
  const QMatrix coords = inverse(basis);
  auto sigma = [&](const QVector& v) { return (coords * v).back() * line; };

  std::vector<QVector> w;
  for (std::size_t p = 0; p < n; ++p) w.push_back(basis.column(p));
  const std::size_t l = n - 1;

  Rational worst = 0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p; q < n; ++q) {
      const QVector b = geodesic_polarization(ma, w[p], w[q]);
      QVector coeff;
      if (p == l && q == l) {
        coeff = sigma(b) - b;  // sigma(F(line)) - F(line)
      } else {
        coeff = (p == q ? Rational(1) : Rational(2)) * sigma(b);
      }
      worst = std::max(worst, dot(coeff, coeff));
    }
  return worst;
}

// ---------------------------------------------------------------------------

Realization builtin_realization(std::string_view name) {
  const Rational half(1, 2);
  if (name == "sl2") {
    return {QMatrix{{0, 1}, {0, 0}}, QMatrix{{-half, 0}, {0, half}}, QMatrix{{0, 0}, {half, 0}}};
  }
  if (name == "sol") {
    return {QMatrix{{0, 0, 1}, {0, 0, 0}, {0, 0, 0}}, QMatrix{{0, 0, 0}, {0, 0, 1}, {0, 0, 0}},
            QMatrix{{1, 0, 0}, {0, -1, 0}, {0, 0, 0}}};
  }
  if (name == "euc") {
    return {QMatrix{{0, 0, 1}, {0, 0, 0}, {0, 0, 0}}, QMatrix{{0, 0, 0}, {0, 0, 1}, {0, 0, 0}},
            QMatrix{{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}};
  }
  if (name == "sol_euc") {
    Realization out;
    for (std::string_view part : {"sol", "euc"}) {
      for (const QMatrix& block : builtin_realization(part)) {
        QMatrix m(6, 6);
        const std::size_t off = part == "sol" ? 0 : 3;
        for (std::size_t i = 0; i < 3; ++i)
          for (std::size_t j = 0; j < 3; ++j) m(off + i, off + j) = block(i, j);
        out.push_back(std::move(m));
      }
    }
    return out;
  }
  throw Error(ErrorKind::NotFound, "no builtin realization for '" + std::string(name) + "'");
}

Rational realization_residual(const LieAlgebra& alg, const Realization& r) {
  if (r.size() != alg.dim()) throw Error(ErrorKind::InvalidRealization, "realization needs one matrix per basis vector");
  const std::size_t m = r.front().rows();
  for (const auto& mat : r)
    if (mat.rows() != m || mat.cols() != m)
      throw Error(ErrorKind::InvalidRealization, "realization matrices must share one square size");
  Rational worst = 0;
  for (std::size_t i = 0; i < alg.dim(); ++i)
    for (std::size_t j = i + 1; j < alg.dim(); ++j) {
      QMatrix lhs = r[i] * r[j] - r[j] * r[i];
      for (std::size_t k = 0; k < alg.dim(); ++k)
        if (alg.structure(i, j, k) != 0) lhs = lhs - alg.structure(i, j, k) * r[k];
      worst = std::max(worst, lhs.max_abs());
    }
  return worst;
}

Eigen::MatrixXd realize(const Realization& r, const Eigen::VectorXd& x) {
  const auto m = static_cast<Eigen::Index>(r.front().rows());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t i = 0; i < r.size(); ++i) out += x(static_cast<Eigen::Index>(i)) * r[i].to_eigen();
  return out;
}

GroupCurve reconstruct_group_curve(const MetricAlgebra& ma, const Realization& realization,
                                   const Trajectory& traj, double tol) {
  if (traj.states.empty()) throw Error(ErrorKind::InvalidInput, "empty trajectory");
  if (realization_residual(ma.algebra(), realization) != 0)
    throw Error(ErrorKind::InvalidRealization, "realization does not preserve brackets");

  const auto n = static_cast<Eigen::Index>(ma.dim());
  const auto m = static_cast<Eigen::Index>(realization.front().rows());
  std::vector<Eigen::MatrixXd> basis;
  for (const auto& r : realization) basis.push_back(r.to_eigen());
  auto realize_d = [&](const Eigen::VectorXd& x) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < n; ++i) out += x(i) * basis[static_cast<std::size_t>(i)];
    return out;
  };

  // Coupled state z = [x ; vec(g)], column-major.
  const ode::Field field = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd dz(z.size());
    const Eigen::VectorXd x = z.head(n);
    dz.head(n) = geodesic_field(ma, x);
    Eigen::Map<const Eigen::MatrixXd> g(z.data() + n, m, m);
    Eigen::MatrixXd dg = g * realize_d(x);
    dz.tail(m * m) = Eigen::Map<const Eigen::VectorXd>(dg.data(), m * m);
    return dz;
  };
  auto advance = [&](Eigen::VectorXd z, double duration) {
    const double dir = duration >= 0 ? 1.0 : -1.0;
    const double span = std::abs(duration);
    double done = 0.0;
    Eigen::VectorXd fz = field(z);
    double h = ode::initial_step(z, fz, span);
    while (span - done > 0.0) {
      h = std::min(h, span - done);
      if (h < 1e-15 * std::max(1.0, span)) break;
      ode::Step s = ode::dopri5_step(field, z, fz, dir * h, tol, tol);
      if (s.error <= 1.0) {
        done = (h >= span - done) ? span : done + h;
        z = std::move(s.y);
        fz = std::move(s.f_end);
      }
      h = ode::next_step_size(h, std::isfinite(s.error) ? s.error : 1e10);
    }
    return z;
  };
  auto pack = [&](const Eigen::VectorXd& x, const Eigen::MatrixXd& g) {
    Eigen::VectorXd z(n + m * m);
    z.head(n) = x;
    z.tail(m * m) = Eigen::Map<const Eigen::VectorXd>(g.data(), m * m);
    return z;
  };
  auto unpack_g = [&](const Eigen::VectorXd& z) {
    return Eigen::MatrixXd(Eigen::Map<const Eigen::MatrixXd>(z.data() + n, m, m));
  };

  GroupCurve curve;
  curve.times = traj.times;
  curve.elements.push_back(Eigen::MatrixXd::Identity(m, m));
  for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) {
    const double h = traj.times[k + 1] - traj.times[k];
    const double scale = std::max(realize_d(traj.states[k]).norm(), realize_d(traj.states[k + 1]).norm());
    const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(std::abs(h) * scale / 0.02)));
    const double hp = h / static_cast<double>(pieces);
    Eigen::VectorXd z = pack(traj.states[k], curve.elements.back());
    for (std::size_t p = 0; p < pieces; ++p) {
      const Eigen::MatrixXd g_start = unpack_g(z);
      const Eigen::VectorXd z_mid = advance(z, hp / 2);
      z = advance(z_mid, hp / 2);
      if (hp != 0.0) {
        const Eigen::MatrixXd step = g_start.inverse() * unpack_g(z);
        const Eigen::MatrixXd d = step.log() / hp;
        const Eigen::MatrixXd x_mid = realize_d(z_mid.head(n));
        curve.log_derivative_residual =
            std::max(curve.log_derivative_residual, (d - x_mid).norm() / std::max(1.0, x_mid.norm()));
      }
    }
    const Eigen::VectorXd& stored = traj.states[k + 1];
    curve.state_residual =
        std::max(curve.state_residual, (z.head(n) - stored).norm() / std::max(1.0, stored.norm()));
    curve.elements.push_back(unpack_g(z));
  }
  return curve;
}

}  // namespace ealab
