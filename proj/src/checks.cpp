#include "ealab/checks.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "ealab/error.hpp"
#include "ealab/flow.hpp"
#include "ealab/lattice.hpp"
#include "ealab/metric.hpp"
#include "ealab/parallel.hpp"
#include "ealab/solver.hpp"

namespace ealab {

namespace {

struct Outcome {
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

Outcome exact(const Rational& residual, std::string detail = "") {
  return {residual == 0, residual.get_d(), 0.0, std::move(detail)};
}

Outcome numeric(double residual, double tolerance, std::string detail = "") {
  return {std::isfinite(residual) && residual <= tolerance, residual, tolerance, std::move(detail)};
}

// Structural checks count mismatches; zero mismatches passes.
Outcome count(std::size_t mismatches, std::string detail) {
  return {mismatches == 0, static_cast<double>(mismatches), 0.0, std::move(detail)};
}

struct Check {
  std::string id;
  std::string claim;
  std::function<Outcome()> run;
};

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-20, 20), den(1, 12);
  return Rational(num(rng), den(rng));
}

QVector random_qvector(std::mt19937_64& rng, std::size_t n) {
  QVector v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(random_rational(rng));
  return v;
}

Rational vec_residual(const QVector& a, const QVector& b) { return max_abs(a - b); }

const MetricAlgebra& metric_algebra(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<MetricAlgebra>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[name];
  if (!slot) slot = std::make_unique<MetricAlgebra>(load_metric_algebra(name));
  return *slot;
}

const std::vector<SpecialDirection>& directions(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, std::vector<SpecialDirection>> cache;
  const MetricAlgebra& ma = metric_algebra(name);
  std::lock_guard lock(mu);
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, find_special_directions(ma)).first;
  return it->second;
}

QVector v0() { return make_qvector({Rational(3, 8), Rational(-1, 2), 1}); }

bool on_line(const Eigen::VectorXd& v, const QVector& line) {
  return projective_distance(v, to_eigen(line).normalized()) < 1e-9;
}

bool spans_equal(const std::vector<Eigen::VectorXd>& basis, const std::vector<QVector>& expected) {
  if (basis.size() != expected.size()) return false;
  std::vector<Eigen::VectorXd> cols;
  for (const auto& q : expected) cols.push_back(to_eigen(q));
  Eigen::MatrixXd m(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = cols[i];
  const Eigen::MatrixXd q = m.householderQr().householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
  for (const auto& b : basis)
    if ((b - q * (q.transpose() * b)).norm() > 1e-9) return false;
  return true;
}

std::string describe(const std::vector<SpecialDirection>& dirs) {
  std::ostringstream os;
  os.precision(6);
  for (const auto& d : dirs) {
    os << to_string(d.kind) << " dim " << d.component_dim << " v=(";
    for (Eigen::Index i = 0; i < d.v.size(); ++i) os << (i ? "," : "") << d.v(i);
    os << ") lambda=" << d.lambda << "; ";
  }
  return os.str();
}

Rational matrices_residual(const std::vector<QMatrix>& got, const std::vector<QMatrix>& want) {
  Rational worst = 0;
  for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, (got[i] - want[i]).max_abs());
  return worst;
}

Outcome signature_check(const std::string& name, int pos, int neg) {
  const Inertia in = inertia(metric_algebra(name).form());
  std::ostringstream os;
  os << "inertia (+" << in.positive << ", -" << in.negative << ", 0:" << in.zero << ")";
  return count(static_cast<std::size_t>(std::abs(in.positive - pos) + std::abs(in.negative - neg) + in.zero),
               os.str());
}

Outcome field_formula(const std::string& name, const std::function<QVector(const QVector&)>& formula) {
  const MetricAlgebra& ma = metric_algebra(name);
  std::mt19937_64 rng(7);
  Rational worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const QVector x = random_qvector(rng, 3);
    worst = std::max(worst, vec_residual(geodesic_field(ma, x), formula(x)));
  }
  return exact(worst, "1000 random rational points");
}

Outcome ad_matrices(const std::string& name, const std::vector<QMatrix>& want) {
  const MetricAlgebra& ma = metric_algebra(name);
  std::vector<QMatrix> got;
  for (std::size_t i = 0; i < 3; ++i) got.push_back(ma.ad(i));
  return exact(matrices_residual(got, want));
}

Outcome adstar_matrices(const std::string& name, const std::vector<QMatrix>& want) {
  const MetricAlgebra& ma = metric_algebra(name);
  std::vector<QMatrix> got;
  for (std::size_t i = 0; i < 3; ++i) got.push_back(ma.adstar(i));
  return exact(matrices_residual(got, want));
}

Outcome bracket_table(const std::string& name,
                      const std::vector<std::tuple<std::size_t, std::size_t, QVector>>& table) {
  const LieAlgebra alg = load_builtin(name);
  Rational worst = jacobi_residual(alg);
  for (const auto& [i, j, want] : table)
    worst = std::max(worst, vec_residual(bracket(alg, unit_qvector(alg.dim(), i), unit_qvector(alg.dim(), j)), want));
  return exact(worst, "includes the Jacobi residual");
}

// ---------------------------------------------------------------------------

std::vector<Check> registry() {
  std::vector<Check> checks;
  auto add = [&](std::string id, std::string claim, std::function<Outcome()> run) {
    checks.push_back({std::move(id), std::move(claim), std::move(run)});
  };
  const Rational half(1, 2);

  // --- sl2 -----------------------------------------------------------------
  add("sl2.brackets", "In the basis (e, h, f): [f,e] = h, [h,e] = -e, [h,f] = f, and the Jacobi identity holds", [] {
    return bracket_table("sl2", {{2, 0, make_qvector({0, 1, 0})}, {1, 0, make_qvector({-1, 0, 0})},
                                 {1, 2, make_qvector({0, 0, 1})}});
  });
  add("sl2.killing", "Killing form: K(e,f) = K(h,h) = 2, every other pairing of basis vectors is 0", [] {
    const QMatrix want{{0, 0, 2}, {0, 2, 0}, {2, 0, 0}};
    return exact((killing_form(load_builtin("sl2")) - want).max_abs());
  });
  add("sl2.factor",
      "The metric q(v,w) = K(v, A w) has K-self-adjoint factor A = [[1,1,0],[0,1,1],[0,0,1]]", [] {
        const MetricAlgebra& ma = metric_algebra("sl2");
        const BilinearForm k(killing_form(ma.algebra()));
        const QMatrix a = self_adjoint_factor(k, ma.form());
        const QMatrix want{{1, 1, 0}, {0, 1, 1}, {0, 0, 1}};
        const QMatrix ka = k.gram() * a;
        return exact(std::max((a - want).max_abs(), (ka - ka.transpose()).max_abs()),
                     "includes the self-adjointness defect of A");
      });
  add("sl2.signature", "q is Lorentzian: two positive and one negative direction",
      [] { return signature_check("sl2", 2, 1); });
  add("sl2.v0", "v0 = (3/8, -1/2, 1) is q-null and A v0 = [A v0, v0]", [] {
    const MetricAlgebra& ma = metric_algebra("sl2");
    const QMatrix a = sl2_metric_factor();
    const QVector av = a * v0();
    return exact(std::max(abs(ma.form()(v0(), v0())), vec_residual(av, bracket(ma.algebra(), av, v0()))));
  });
  add("sl2.factored-field", "For the metric K(., A .), A F(x) = [A x, x] where F(x) = ad*_x x", [] {
    const MetricAlgebra& ma = metric_algebra("sl2");
    const QMatrix a = sl2_metric_factor();
    std::mt19937_64 rng(11);
    Rational worst = 0;
    for (int i = 0; i < 200; ++i) {
      const QVector x = random_qvector(rng, 3);
      worst = std::max(worst, vec_residual(a * geodesic_field(ma, x), bracket(ma.algebra(), a * x, x)));
    }
    return exact(worst, "200 random rational points");
  });
  add("sl2.plane", "span(e, h) is invariant and the field on it is x e + y h -> y^2 e", [] {
    const MetricAlgebra& ma = metric_algebra("sl2");
    Rational worst = subspace_invariance_residual(ma, {unit_qvector(3, 0), unit_qvector(3, 1)});
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
      const Rational x = random_rational(rng), y = random_rational(rng);
      worst = std::max(worst, vec_residual(geodesic_field(ma, make_qvector({x, y, 0})), make_qvector({y * y, 0, 0})));
    }
    return exact(worst);
  });
  add("sl2.sigma", "The projection onto R v0 along span(e, h) commutes with the field: sigma(F(v)) = F(sigma(v))",
      [] {
        return exact(projection_equivariance_residual(metric_algebra("sl2"), v0(),
                                                      {unit_qvector(3, 0), unit_qvector(3, 1)}));
      });
  add("sl2.radial", "The only lines with F(v) = lambda v are R e (lambda = 0) and R v0 (lambda != 0)", [] {
    const auto& dirs = directions("sl2");
    std::size_t bad = dirs.size() == 2 ? 0 : 1;
    bool has_e = false, has_v0 = false;
    for (const auto& d : dirs) {
      if (d.kind == DirectionKind::Constant && on_line(d.v, unit_qvector(3, 0)) && d.isolated) has_e = true;
      else if (d.kind == DirectionKind::Radial && on_line(d.v, v0()) && d.isolated) has_v0 = true;
      else ++bad;
    }
    return count(bad + !has_e + !has_v0, describe(dirs));
  });
  add("sl2.null-radial", "Every direction with F(v) = lambda v, lambda != 0, is q-null", [] {
    const MetricAlgebra& ma = metric_algebra("sl2");
    double worst = 0;
    for (const auto& d : directions("sl2"))
      if (d.kind == DirectionKind::Radial) worst = std::max(worst, std::abs(ma.form()(d.v, d.v)));
    return numeric(worst, 1e-7, "max |q(v,v)| over radial directions");
  });
  add("sl2.complete",
      "Solutions from span(e, h) are complete; from v0 the solution blows up forward at t = 1, from -v0 backward "
      "at t = -1",
      [] {
        const MetricAlgebra& ma = metric_algebra("sl2");
        std::size_t bad = 0;
        std::ostringstream os;
        for (const Eigen::Vector3d& v : {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(-2, 0.5, 0)}) {
          const CompletenessTag tag = completeness_classify(ma, v);
          if (tag.value != Completeness::Complete) ++bad;
        }
        const Eigen::VectorXd p = to_eigen(v0());
        const CompletenessTag fwd = completeness_classify(ma, p);
        const CompletenessTag bwd = completeness_classify(ma, -p);
        if (fwd.value != Completeness::FutureIncomplete || !fwd.forward.blowup_time) ++bad;
        if (bwd.value != Completeness::PastIncomplete || !bwd.backward.blowup_time) ++bad;
        if (bad) return count(bad, "verdict mismatch");
        const double err = std::max(std::abs(*fwd.forward.blowup_time - 1.0), std::abs(*bwd.backward.blowup_time + 1.0));
        os << "blowup times " << *fwd.forward.blowup_time << ", " << *bwd.backward.blowup_time;
        return numeric(err, 1e-3, os.str());
      });
  add("sl2.fixed-points", "The spherized flow has exactly four fixed points: the half-lines through +-e and +-v0", [] {
    const auto fixed = sphere_fixed_points(metric_algebra("sl2"), 10000);
    const Eigen::Vector3d e(1, 0, 0);
    const Eigen::VectorXd w = to_eigen(v0()).normalized();
    std::size_t bad = fixed.size() == 4 ? 0 : 1;
    for (const Eigen::VectorXd& target : {Eigen::VectorXd(e), Eigen::VectorXd(-e), w, Eigen::VectorXd(-w)}) {
      const bool found = std::any_of(fixed.begin(), fixed.end(), [&](const Eigen::VectorXd& u) { return (u - target).norm() < 1e-6; });
      if (!found) ++bad;
    }
    return count(bad, std::to_string(fixed.size()) + " fixed points on a 10^4-point grid");
  });
  add("sl2.portrait-plane",
      "On the circle of span(e, h), every point other than +-e tends to +e in the future and to -e in the past", [] {
        const MetricAlgebra& ma = metric_algebra("sl2");
        OrbitOptions opts;
        opts.fixed_points = sphere_fixed_points(ma, 10000);
        std::size_t plus = 0, minus = 0;
        for (std::size_t i = 0; i < opts.fixed_points.size(); ++i) {
          if ((opts.fixed_points[i] - Eigen::Vector3d(1, 0, 0)).norm() < 1e-6) plus = i;
          if ((opts.fixed_points[i] - Eigen::Vector3d(-1, 0, 0)).norm() < 1e-6) minus = i;
        }
        std::vector<Eigen::VectorXd> starts;
        for (int k = 0; k < 8; ++k) {
          const double a = (k + 0.5) * std::numbers::pi / 4.0;
          starts.push_back(Eigen::Vector3d(std::cos(a), std::sin(a), 0));
        }
        std::size_t bad = 0;
        for (const OrbitClass& oc : classify_sphere_orbits(ma, starts, opts)) {
          if (oc.kind != OrbitKind::ConvergesToFixedPoint || oc.target != plus || oc.past_target != minus) ++bad;
        }
        return count(bad, "8 starts on the circle");
      });
  add("sl2.portrait-disks", "No orbit inside the four open disks of the spherized flow is closed", [] {
    const MetricAlgebra& ma = metric_algebra("sl2");
    OrbitOptions opts;
    opts.fixed_points = sphere_fixed_points(ma, 10000);
    const auto starts = sl2_disk_samples(100, 0);
    std::size_t closed = 0, unresolved = 0;
    for (const OrbitClass& oc : classify_sphere_orbits(ma, starts, opts)) {
      if (oc.kind == OrbitKind::ClosedOrbit) ++closed;
      if (oc.kind == OrbitKind::Unresolved) ++unresolved;
    }
    return count(closed, std::to_string(starts.size()) + " orbits, " + std::to_string(unresolved) + " unresolved");
  });
  add("sl2.coset",
      "The group curve of the radial solution through v0 stays on the one-parameter group exp(s V0)", [] {
        const MetricAlgebra& ma = metric_algebra("sl2");
        const Realization r = builtin_realization("sl2");
        const Trajectory traj = integrate(ma, to_eigen(v0()), 0.9);
        const GroupCurve curve = reconstruct_group_curve(ma, r, traj);
        const Eigen::MatrixXd gen = realize(r, to_eigen(v0()));
        double worst = 0;
        for (const auto& g : curve.elements) {
          const Eigen::MatrixXd l = g.log();
          const double s = (l.cwiseProduct(gen)).sum() / gen.squaredNorm();
          worst = std::max(worst, (l - s * gen).norm() / std::max(1.0, l.norm()));
        }
        return numeric(worst, 1e-7, "relative distance of log(g(t)) to R V0");
      });
  add("sl2.biinvariant", "With the Killing form as metric, ad*_x = -ad_x and F vanishes identically", [] {
    const MetricAlgebra km = killing_metric_algebra(load_builtin("sl2"));
    Rational worst = biinvariance_residual(km);
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) worst = std::max(worst, max_abs(geodesic_field(km, random_qvector(rng, 3))));
    return exact(worst, "100 random rational points");
  });

  // --- sol -----------------------------------------------------------------
  add("sol.brackets", "In the basis (e1, e2, h): [h,e1] = e1, [h,e2] = -e2, [e1,e2] = 0", [] {
    return bracket_table("sol", {{2, 0, make_qvector({1, 0, 0})}, {2, 1, make_qvector({0, -1, 0})},
                                 {0, 1, make_qvector({0, 0, 0})}});
  });
  add("sol.ad", "ad_e1 = -E13, ad_e2 = E23, ad_h = diag(1, -1, 0)", [] {
    return ad_matrices("sol", {QMatrix{{0, 0, -1}, {0, 0, 0}, {0, 0, 0}}, QMatrix{{0, 0, 0}, {0, 0, 1}, {0, 0, 0}},
                               QMatrix{{1, 0, 0}, {0, -1, 0}, {0, 0, 0}}});
  });
  add("sol.adstar", "ad*_e1 = -E13, ad*_e2 = E12, ad*_h = diag(0, -1, 1)", [] {
    return adstar_matrices("sol", {QMatrix{{0, 0, -1}, {0, 0, 0}, {0, 0, 0}}, QMatrix{{0, 1, 0}, {0, 0, 0}, {0, 0, 0}},
                                   QMatrix{{0, 0, 0}, {0, -1, 0}, {0, 0, 1}}});
  });
  add("sol.signature", "q is Lorentzian: two positive and one negative direction",
      [] { return signature_check("sol", 2, 1); });
  add("sol.field", "F(x, y, z) = (y^2 - x z, -y z, z^2)", [] {
    return field_formula("sol", [](const QVector& v) {
      return make_qvector({v[1] * v[1] - v[0] * v[2], -v[1] * v[2], v[2] * v[2]});
    });
  });
  add("sol.plane", "span(e1, e2) is invariant and the field on it is x e1 + y e2 -> y^2 e1", [] {
    const MetricAlgebra& ma = metric_algebra("sol");
    Rational worst = subspace_invariance_residual(ma, {unit_qvector(3, 0), unit_qvector(3, 1)});
    std::mt19937_64 rng(19);
    for (int i = 0; i < 100; ++i) {
      const Rational x = random_rational(rng), y = random_rational(rng);
      worst = std::max(worst, vec_residual(geodesic_field(ma, make_qvector({x, y, 0})), make_qvector({y * y, 0, 0})));
    }
    return exact(worst);
  });
  add("sol.sigma", "The projection onto R h along span(e1, e2) commutes with the field; sigma(F(v)) = z^2 h", [] {
    const MetricAlgebra& ma = metric_algebra("sol");
    const std::vector<QVector> comp{unit_qvector(3, 0), unit_qvector(3, 1)};
    Rational worst = projection_equivariance_residual(ma, unit_qvector(3, 2), comp);
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
      const QVector v = random_qvector(rng, 3);
      worst = std::max(worst, abs(Rational(projection_coordinate(geodesic_field(ma, v), unit_qvector(3, 2), comp) - v[2] * v[2])));
    }
    return exact(worst);
  });
  add("sol.radial", "The only lines with F(v) = lambda v are R e1 (lambda = 0) and R h (F(h) = h)", [] {
    const auto& dirs = directions("sol");
    std::size_t bad = dirs.size() == 2 ? 0 : 1;
    bool has_e1 = false, has_h = false;
    for (const auto& d : dirs) {
      if (d.kind == DirectionKind::Constant && on_line(d.v, unit_qvector(3, 0))) has_e1 = true;
      else if (d.kind == DirectionKind::Radial && on_line(d.v, unit_qvector(3, 2)) && std::abs(d.lambda - 1.0) < 1e-9)
        has_h = true;
      else ++bad;
    }
    return count(bad + !has_e1 + !has_h, describe(dirs));
  });
  add("sol.blowup", "The solution from h blows up at t = 1; the solution from e1 is constant", [] {
    const MetricAlgebra& ma = metric_algebra("sol");
    const Trajectory th = integrate(ma, Eigen::Vector3d(0, 0, 1), 10.0);
    const Trajectory te = integrate(ma, Eigen::Vector3d(1, 0, 0), 100.0);
    if (th.termination != Termination::BlowupDetected || !th.blowup_time)
      return count(1, std::string("from h: ") + to_string(th.termination));
    double drift = 0;
    for (const auto& s : te.states) drift = std::max(drift, (s - Eigen::Vector3d(1, 0, 0)).norm());
    if (te.termination != Termination::HorizonReached || drift != 0.0) return count(1, "e1 trajectory not constant");
    return numeric(std::abs(*th.blowup_time - 1.0), 1e-3, "blowup time " + std::to_string(*th.blowup_time));
  });

  // --- euc -----------------------------------------------------------------
  add("euc.brackets", "In the basis (f1, f2, e): [e,f1] = -f2, [e,f2] = f1, [f1,f2] = 0", [] {
    return bracket_table("euc", {{2, 0, make_qvector({0, -1, 0})}, {2, 1, make_qvector({1, 0, 0})},
                                 {0, 1, make_qvector({0, 0, 0})}});
  });
  add("euc.ad", "ad_f1 = E23, ad_f2 = -E13, ad_e = E12 - E21", [] {
    return ad_matrices("euc", {QMatrix{{0, 0, 0}, {0, 0, 1}, {0, 0, 0}}, QMatrix{{0, 0, -1}, {0, 0, 0}, {0, 0, 0}},
                               QMatrix{{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}});
  });
  add("euc.adstar", "ad*_f1 = E12, ad*_f2 = -E13, ad*_e = E23 - E32", [] {
    return adstar_matrices("euc", {QMatrix{{0, 1, 0}, {0, 0, 0}, {0, 0, 0}}, QMatrix{{0, 0, -1}, {0, 0, 0}, {0, 0, 0}},
                                   QMatrix{{0, 0, 0}, {0, 0, 1}, {0, -1, 0}}});
  });
  add("euc.signature", "g is Lorentzian: two positive and one negative direction",
      [] { return signature_check("euc", 2, 1); });
  add("euc.field", "F(x, y, z) = (x y - y z, z^2, -y z)", [] {
    return field_formula("euc", [](const QVector& v) {
      return make_qvector({v[0] * v[1] - v[1] * v[2], v[2] * v[2], -v[1] * v[2]});
    });
  });
  add("euc.plane", "span(f1, f2) is invariant; span(f1, e) is not", [] {
    const MetricAlgebra& ma = metric_algebra("euc");
    const Rational good = subspace_invariance_residual(ma, {unit_qvector(3, 0), unit_qvector(3, 1)});
    const Rational bad = subspace_invariance_residual(ma, {unit_qvector(3, 0), unit_qvector(3, 2)});
    Outcome out = exact(good, "span(f1, e) residual " + to_string(bad));
    if (bad == 0) out.passed = false;
    return out;
  });
  add("euc.radial", "No line has F(v) = lambda v with lambda != 0; the constant lines are R f1 and R f2", [] {
    const auto& dirs = directions("euc");
    std::size_t bad = dirs.size() == 2 ? 0 : 1;
    bool has_f1 = false, has_f2 = false;
    for (const auto& d : dirs) {
      if (d.kind == DirectionKind::Constant && on_line(d.v, unit_qvector(3, 0))) has_f1 = true;
      else if (d.kind == DirectionKind::Constant && on_line(d.v, unit_qvector(3, 1))) has_f2 = true;
      else ++bad;
    }
    return count(bad + !has_f1 + !has_f2, describe(dirs));
  });

  // --- product -------------------------------------------------------------
  add("product.brackets", "sol_euc is the direct sum of sol and euc: block structure, cross brackets zero", [] {
    const LieAlgebra sum = direct_sum(load_builtin("sol"), load_builtin("euc"));
    const LieAlgebra prod = load_builtin("sol_euc");
    Rational worst = jacobi_residual(prod);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j)
        for (std::size_t k = 0; k < 6; ++k) worst = std::max(worst, abs(Rational(sum.structure(i, j, k) - prod.structure(i, j, k))));
    return exact(worst);
  });
  add("product.signature", "q + g has four directions of one sign and two of the other",
      [] { return signature_check("sol_euc", 4, 2); });
  add("product.constants", "The constant solutions form span(e1, f1) and span(e1, f2)", [] {
    const MetricAlgebra& ma = metric_algebra("sol_euc");
    const std::vector<QVector> p1{unit_qvector(6, 0), unit_qvector(6, 3)};
    const std::vector<QVector> p2{unit_qvector(6, 0), unit_qvector(6, 4)};
    Rational worst = 0;
    for (const auto& plane : {p1, p2})
      for (const auto& a : plane)
        for (const auto& b : plane) worst = std::max(worst, max_abs(geodesic_polarization(ma, a, b)));
    if (worst != 0) return exact(worst, "F does not vanish on the planes");
    std::size_t bad = 0;
    bool has1 = false, has2 = false;
    const auto& dirs = directions("sol_euc");
    for (const auto& d : dirs) {
      if (d.kind != DirectionKind::Constant) continue;
      if (d.component_dim == 2 && !d.isolated && spans_equal(d.basis, p1)) has1 = true;
      else if (d.component_dim == 2 && !d.isolated && spans_equal(d.basis, p2)) has2 = true;
      else ++bad;
    }
    return count(bad + !has1 + !has2, describe(dirs));
  });
  add("product.radial", "The only line with F(v) = lambda v, lambda != 0, is R h", [] {
    const auto& dirs = directions("sol_euc");
    std::size_t radial = 0, bad = 0;
    for (const auto& d : dirs) {
      if (d.kind != DirectionKind::Radial) continue;
      ++radial;
      if (!on_line(d.v, unit_qvector(6, 2))) ++bad;
    }
    return count(bad + (radial == 1 ? 0 : 1), describe(dirs));
  });

  // --- lattice -------------------------------------------------------------
  add("lattice.search",
      "Among |a|, |b| <= 10 some quartic x^4 + a x^3 + b x^2 + a x + 1 is accepted, (-3, 3) among them; (-4, 5) is "
      "reducible",
      [] {
        const auto found = enumerate_candidates(10);
        const bool has = std::find(found.begin(), found.end(), ReciprocalQuartic{-3, 3}) != found.end();
        const bool reducible = classify_quartic({-4, 5}) == QuarticStatus::Reducible;
        return count(!has + !reducible + found.empty(), std::to_string(found.size()) + " accepted quartics");
      });
  add("lattice.certificates",
      "Every accepted quartic has a companion matrix in SL(4, Z) conjugate to diag(lambda, 1/lambda, R_alpha)", [] {
        double worst = 0;
        std::size_t bad = 0;
        for (const auto& q : enumerate_candidates(10)) {
          const LoxodromicCertificate cert = certify(q);
          if (cert.companion_det != 1) ++bad;
          worst = std::max(worst, cert.residual);
        }
        if (bad) return count(bad, "companion determinant differs from 1");
        return numeric(worst, 1e-10, "max block-diagonalization residual");
      });
  add("lattice.gamma", "phi = diag(lambda, 1/lambda, R_alpha) maps the lattice spanned by the columns of S^-1 to itself",
      [] {
        double worst = 0;
        for (const auto& q : enumerate_candidates(10)) worst = std::max(worst, build_gamma(certify(q)).residual);
        return numeric(worst, 1e-9, "max |phi S^-1 - S^-1 C|");
      });
  return checks;
}

const std::vector<Check>& checks() {
  static const std::vector<Check> all = registry();
  return all;
}

}  // namespace

std::vector<CheckInfo> list_checks() {
  std::vector<CheckInfo> out;
  for (const auto& c : checks()) out.push_back({c.id, c.claim});
  return out;
}

std::vector<CheckResult> run_checks(std::string_view prefix, bool parallel) {
  std::vector<const Check*> selected;
  for (const auto& c : checks())
    if (c.id.starts_with(prefix)) selected.push_back(&c);

  std::vector<CheckResult> results(selected.size());
  auto run_one = [&](std::size_t i) {
    const Check& c = *selected[i];
    CheckResult& r = results[i];
    r.id = c.id;
    r.claim = c.claim;
    try {
      Outcome o = c.run();
      r.passed = o.passed;
      r.residual = o.residual;
      r.tolerance = o.tolerance;
      r.detail = std::move(o.detail);
    } catch (const std::exception& e) {
      r.passed = false;
      r.residual = std::numeric_limits<double>::infinity();
      r.detail = std::string("exception: ") + e.what();
    }
  };
  if (parallel) {
    parallel_for(selected.size(), run_one);
  } else {
    for (std::size_t i = 0; i < selected.size(); ++i) run_one(i);
  }
  return results;
}

int sl2_disk(const Eigen::VectorXd& u) {
  const double q = u.dot(metric_algebra("sl2").gram_d() * u);
  return 2 * (q < 0 ? 1 : 0) + (u(2) < 0 ? 1 : 0);
}

std::vector<Eigen::VectorXd> sl2_disk_samples(std::size_t per_disk, std::uint64_t seed) {
  const Eigen::MatrixXd& q = metric_algebra("sl2").gram_d();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<Eigen::VectorXd>> disks(4);
  std::size_t filled = 0;
  while (filled < 4) {
    Eigen::VectorXd u(3);
    for (auto& c : u) c = normal(rng);
    if (u.norm() < 1e-6) continue;
    u.normalize();
    if (std::abs(u.dot(q * u)) < 1e-2 || std::abs(u(2)) < 1e-2) continue;
    auto& bucket = disks[static_cast<std::size_t>(sl2_disk(u))];
    if (bucket.size() < per_disk) {
      bucket.push_back(u);
      if (bucket.size() == per_disk) ++filled;
    }
  }
  std::vector<Eigen::VectorXd> out;
  for (const auto& d : disks) out.insert(out.end(), d.begin(), d.end());
  return out;
}

}  // namespace ealab
