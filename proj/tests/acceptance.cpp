// Acceptance run: one line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "ealab/checks.hpp"
#include "ealab/flow.hpp"
#include "ealab/lattice.hpp"
#include "ealab/parallel.hpp"
#include "ealab/report.hpp"
#include "ealab/solver.hpp"
#include "unit/support.hpp"

using namespace ealab;
using oracle::qv;

namespace {

const QVector kV0 = qv({Rational(3, 8), Rational(-1, 2), 1});

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string str(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// ---------------------------------------------------------------------------

Outcome exact_claims() {
  Outcome out;
  const MetricAlgebra sl2 = load_metric_algebra("sl2"), sol = load_metric_algebra("sol"),
                      euc = load_metric_algebra("euc");
  const QMatrix k = killing_form(sl2.algebra());
  out.require(k(0, 2) == 2 && k(1, 1) == 2, "Killing <e,f> = <h,h> = 2");
  out.require(k(0, 0) == 0 && k(0, 1) == 0 && k(1, 2) == 0 && k(2, 2) == 0, "Killing zero entries");

  using M = QMatrix;
  const M sol_ad[3] = {M{{0, 0, -1}, {0, 0, 0}, {0, 0, 0}}, M{{0, 0, 0}, {0, 0, 1}, {0, 0, 0}},
                       M{{1, 0, 0}, {0, -1, 0}, {0, 0, 0}}};
  const M sol_adstar[3] = {M{{0, 0, -1}, {0, 0, 0}, {0, 0, 0}}, M{{0, 1, 0}, {0, 0, 0}, {0, 0, 0}},
                           M{{0, 0, 0}, {0, -1, 0}, {0, 0, 1}}};
  const M euc_ad[3] = {M{{0, 0, 0}, {0, 0, 1}, {0, 0, 0}}, M{{0, 0, -1}, {0, 0, 0}, {0, 0, 0}},
                       M{{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}};
  const M euc_adstar[3] = {M{{0, 1, 0}, {0, 0, 0}, {0, 0, 0}}, M{{0, 0, -1}, {0, 0, 0}, {0, 0, 0}},
                           M{{0, 0, 0}, {0, 0, 1}, {0, -1, 0}}};
  for (std::size_t i = 0; i < 3; ++i) {
    out.require(sol.ad(i) == sol_ad[i], "sol ad_" + std::to_string(i));
    out.require(sol.adstar(i) == sol_adstar[i], "sol ad*_" + std::to_string(i));
    out.require(euc.ad(i) == euc_ad[i], "euc ad_" + std::to_string(i));
    out.require(euc.adstar(i) == euc_adstar[i], "euc ad*_" + std::to_string(i));
  }

  out.require(oracle::form(sl2.form().gram(), kV0, kV0) == 0, "q(v0, v0) = 0");
  const QVector av0 = sl2_metric_factor() * kV0;
  out.require(av0 == oracle::bracket(sl2.algebra(), av0, kV0), "A v0 = [A v0, v0]");

  const QVector b0 = qv({1, 0, 0}), b1 = qv({0, 1, 0}), b2 = qv({0, 0, 1});
  out.require(subspace_invariance_residual(sl2, {b0, b1}) == 0, "span(e, h) invariant");
  out.require(subspace_invariance_residual(sol, {b0, b1}) == 0, "span(e1, e2) invariant");
  out.require(subspace_invariance_residual(euc, {b0, b1}) == 0, "{z = 0} invariant");
  out.require(projection_equivariance_residual(sl2, kV0, {b0, b1}) == 0, "sl2 sigma equivariant");
  out.require(projection_equivariance_residual(sol, b2, {b0, b1}) == 0, "sol sigma equivariant");
  if (out.passed) out.detail = "all residuals exactly 0";
  return out;
}

Outcome field_formulas() {
  Outcome out;
  const MetricAlgebra sol = load_metric_algebra("sol"), euc = load_metric_algebra("euc");
  oracle::RandomRational rr(2024);
  int bad_sol = 0, bad_euc = 0;
  for (int t = 0; t < 1000; ++t) {
    const QVector v = rr.vector(3);
    const Rational &x = v[0], &y = v[1], &z = v[2];
    bad_sol += geodesic_field(sol, v) != qv({y * y - x * z, -y * z, z * z});
    bad_euc += geodesic_field(euc, v) != qv({x * y - y * z, z * z, -y * z});
  }
  out.require(bad_sol == 0, std::to_string(bad_sol) + " sol mismatches");
  out.require(bad_euc == 0, std::to_string(bad_euc) + " euc mismatches");
  if (out.passed) out.detail = "2000 exact matches";
  return out;
}

bool is_line(const SpecialDirection& d, const Eigen::VectorXd& v, DirectionKind kind) {
  return d.kind == kind && d.component_dim == 1 && projective_distance(d.v, v.normalized()) < 1e-6;
}

bool spans(const SpecialDirection& d, std::size_t i, std::size_t j) {
  if (d.component_dim != 2 || d.basis.size() != 2) return false;
  Eigen::MatrixXd b(d.v.size(), 2);
  b << d.basis[0], d.basis[1];
  const Eigen::MatrixXd p = b * b.transpose();
  const auto n = d.v.size();
  const Eigen::VectorXd ei = Eigen::VectorXd::Unit(n, static_cast<Eigen::Index>(i));
  const Eigen::VectorXd ej = Eigen::VectorXd::Unit(n, static_cast<Eigen::Index>(j));
  return (p * ei - ei).norm() < 1e-9 && (p * ej - ej).norm() < 1e-9;
}

std::string special_json() {
  std::string out;
  for (const auto& name : builtin_names())
    out += dump(radial_json(find_special_directions(load_metric_algebra(name), SolverOptions{})));
  return out;
}

Outcome special_directions() {
  Outcome out;
  const SolverOptions opts;  // grid density 64, seed 0
  const auto sl2 = find_special_directions(load_metric_algebra("sl2"), opts);
  out.require(sl2.size() == 2 && is_line(sl2[0], Eigen::Vector3d(1, 0, 0), DirectionKind::Constant) &&
                  is_line(sl2[1], to_eigen(kV0), DirectionKind::Radial),
              "sl2 set is not {Re, Rv0}");
  const auto sol = find_special_directions(load_metric_algebra("sol"), opts);
  out.require(sol.size() == 2 && is_line(sol[0], Eigen::Vector3d(1, 0, 0), DirectionKind::Constant) &&
                  is_line(sol[1], Eigen::Vector3d(0, 0, 1), DirectionKind::Radial),
              "sol set is not {Re1, Rh}");
  const auto euc = find_special_directions(load_metric_algebra("euc"), opts);
  for (const auto& d : euc) out.require(d.kind == DirectionKind::Constant, "euc radial direction " + str(d.lambda));
  const auto prod = find_special_directions(load_metric_algebra("sol_euc"), opts);
  bool f1 = false, f2 = false;
  int radial = 0, radial_h = 0, other = 0;
  for (const auto& d : prod) {
    if (d.kind == DirectionKind::Radial) {
      ++radial;
      radial_h += is_line(d, Eigen::VectorXd::Unit(6, 2), DirectionKind::Radial);
    } else if (spans(d, 0, 3)) {
      f1 = true;
    } else if (spans(d, 0, 4)) {
      f2 = true;
    } else {
      ++other;
    }
  }
  out.require(f1 && f2, "product constant planes span(e1,f1), span(e1,f2) missing");
  out.require(radial == 1 && radial_h == 1, "product radial set is not Rh");
  out.require(other == 0, std::to_string(other) + " extra product constants");
  if (out.passed) out.detail = "sl2 2, sol 2, euc " + std::to_string(euc.size()) + " constant, product 2 planes + Rh";
  return out;
}

Outcome incompleteness() {
  Outcome out;
  const MetricAlgebra sl2 = load_metric_algebra("sl2"), sol = load_metric_algebra("sol");
  double worst_blowup = 0;
  for (const auto& [ma, v] : {std::pair(&sl2, to_eigen(kV0)), std::pair(&sol, Eigen::VectorXd(Eigen::Vector3d(0, 0, 1)))}) {
    const Trajectory tr = integrate(*ma, v, 10.0);
    const bool ok = tr.termination == Termination::BlowupDetected && tr.blowup_time;
    out.require(ok, ma->algebra().name() + " no blowup");
    if (ok) worst_blowup = std::max(worst_blowup, std::abs(*tr.blowup_time - 1.0));
  }
  out.require(worst_blowup <= 1e-3, "blowup time off by " + str(worst_blowup));
  oracle::RandomRational rr(77);
  double worst_drift = 0;
  int unfinished = 0;
  for (const MetricAlgebra* ma : {&sl2, &sol})
    for (int t = 0; t < 100; ++t) {
      const Eigen::Vector3d x0(rr.uniform(-1, 1), rr.uniform(-1, 1), 0);
      const Trajectory tr = integrate(*ma, x0, 1e3);
      unfinished += tr.termination != Termination::HorizonReached;
      worst_drift = std::max(worst_drift, tr.energy_drift);
    }
  out.require(unfinished == 0, std::to_string(unfinished) + " plane trajectories stopped early");
  out.require(worst_drift < 1e-6, "plane drift " + str(worst_drift));
  if (out.passed) out.detail = "|t* - 1| <= " + str(worst_blowup) + ", plane drift <= " + str(worst_drift);
  return out;
}

struct Portrait {
  std::vector<Eigen::VectorXd> fixed;
  std::vector<Eigen::VectorXd> starts;
  std::vector<OrbitClass> orbits;
};

Portrait portrait() {
  const MetricAlgebra ma = load_metric_algebra("sl2");
  Portrait p;
  p.fixed = sphere_fixed_points(ma, 10000);
  p.starts = sl2_disk_samples(100, 0);
  OrbitOptions opts;
  opts.fixed_points = p.fixed;
  p.orbits = classify_sphere_orbits(ma, p.starts, opts);
  return p;
}

std::string portrait_text() {
  const Portrait p = portrait();
  Json fixed = Json::array();
  for (const auto& f : p.fixed) fixed.push_back(to_json(f));
  return dump(fixed) + dump(portrait_json(p.starts, p.orbits, p.fixed));
}

Outcome phase_portrait() {
  Outcome out;
  const Portrait p = portrait();
  out.require(p.fixed.size() == 4, std::to_string(p.fixed.size()) + " fixed points");
  const Eigen::Vector3d e(1, 0, 0), v0 = to_eigen(kV0).normalized();
  for (const Eigen::Vector3d& target : {e, Eigen::Vector3d(-e), v0, Eigen::Vector3d(-v0)}) {
    double best = 1e9;
    for (const auto& f : p.fixed) best = std::min(best, (f - target).norm());
    out.require(best < 1e-4, "no fixed point near " + str(target(0)) + "," + str(target(1)) + "," + str(target(2)));
  }
  std::array<int, 4> per_disk{};
  int closed = 0, unresolved = 0;
  for (std::size_t i = 0; i < p.orbits.size(); ++i) {
    ++per_disk[static_cast<std::size_t>(sl2_disk(p.starts[i]))];
    closed += p.orbits[i].kind == OrbitKind::ClosedOrbit;
    unresolved += p.orbits[i].kind == OrbitKind::Unresolved;
  }
  out.require(p.orbits.size() == 400, std::to_string(p.orbits.size()) + " orbits");
  for (int c : per_disk) out.require(c == 100, "disk count " + std::to_string(c));
  out.require(closed == 0, std::to_string(closed) + " ClosedOrbit verdicts");
  if (out.passed)
    out.detail = "4 fixed points, 400 orbits, 0 closed, " + std::to_string(unresolved) + " unresolved";
  return out;
}

Outcome energy_conservation() {
  Outcome out;
  const double tol = 1e-10;
  oracle::RandomRational rr(500);
  double worst = 0;
  int failures = 0, runs = 0;
  IntegrateOptions opts;
  opts.tol = tol;
  for (int t = 0; t < 125; ++t)
    for (const auto& name : builtin_names()) {
      const MetricAlgebra ma = load_metric_algebra(name);
      const Trajectory tr = integrate(ma, rr.gaussian(ma.dim()), 10.0, opts);
      ++runs;
      worst = std::max(worst, tr.energy_drift);
      failures += !(tr.energy_drift <= 100 * tol) || tr.termination == Termination::StepFailure;
    }
  out.require(runs == 500, std::to_string(runs) + " runs");
  out.require(failures == 0, std::to_string(failures) + " runs over 100*tol or failed");
  out.detail += (out.detail.empty() ? "" : "; ") + std::string("worst drift ") + str(worst);
  return out;
}

Outcome biinvariance() {
  Outcome out;
  const MetricAlgebra ma = killing_metric_algebra(load_builtin("sl2"));
  out.require(biinvariance_residual(ma) == 0, "residual " + to_string(biinvariance_residual(ma)));
  oracle::RandomRational rr(7);
  int nonzero = 0;
  for (int t = 0; t < 100; ++t) nonzero += !is_zero(geodesic_field(ma, rr.vector(3)));
  out.require(nonzero == 0, std::to_string(nonzero) + " nonzero field values");
  if (out.passed) out.detail = "residual 0, F = 0 on 100 points";
  return out;
}

std::string lattice_text() {
  std::vector<LoxodromicCertificate> certs;
  std::vector<LatticeData> lat;
  for (const auto& q : enumerate_candidates(10)) {
    certs.push_back(certify(q));
    lat.push_back(build_gamma(certs.back()));
  }
  return dump(lattice_json(10, certs, lat));
}

Outcome lattice_search() {
  Outcome out;
  const auto candidates = enumerate_candidates(10);
  out.require(!candidates.empty(), "empty list");
  out.require(std::find(candidates.begin(), candidates.end(), ReciprocalQuartic{-3, 3}) != candidates.end(),
              "(-3,3) missing");
  double worst_block = 0, worst_lattice = 0;
  for (const auto& q : candidates) {
    const LoxodromicCertificate c = certify(q);
    out.require(determinant(c.companion) == 1, "det != 1 for (" + std::to_string(q.a) + "," + std::to_string(q.b) + ")");
    worst_block = std::max(worst_block, c.residual);
    worst_lattice = std::max(worst_lattice, build_gamma(c).residual);
  }
  out.require(worst_block < 1e-10, "block residual " + str(worst_block));
  out.require(worst_lattice < 1e-9, "lattice residual " + str(worst_lattice));
  if (out.passed)
    out.detail = std::to_string(candidates.size()) + " candidates, block <= " + str(worst_block) + ", lattice <= " +
                 str(worst_lattice);
  return out;
}

Outcome determinism() {
  Outcome out;
  const std::pair<const char*, std::function<std::string()>> producers[] = {
      {"special directions", special_json}, {"portrait", portrait_text}, {"lattice", lattice_text}};
  for (const auto& [name, produce] : producers) {
    set_worker_limit(1);
    const std::string reference = produce();
    const std::string again = produce();
    out.require(reference == again, std::string(name) + " differs between runs");
    for (std::size_t threads : {4u, 8u}) {
      set_worker_limit(threads);
      out.require(produce() == reference, std::string(name) + " differs at " + std::to_string(threads) + " threads");
    }
  }
  set_worker_limit(std::nullopt);
  if (out.passed) out.detail = "3 documents identical over 2 runs at 1 thread and at 4, 8 threads";
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_seconds;  // 0: no runtime bound
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"1 exact claims", 5, exact_claims},
      {"2 geodesic field formulas", 5, field_formulas},
      {"3 special directions", 60, special_directions},
      {"4 incompleteness", 0, incompleteness},
      {"5 phase portrait", 0, phase_portrait},
      {"6 energy conservation", 0, energy_conservation},
      {"7 bi-invariance", 0, biinvariance},
      {"8 lattice search", 10, lattice_search},
      {"9 determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds)
      o.require(false, "runtime " + str(secs) + " s over " + str(c.limit_seconds) + " s");
    failed += !o.passed;
    std::printf("%s  %-28s %7.2f s  %s\n", o.passed ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
