#include "ealab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ealab/error.hpp"
#include "ealab/parallel.hpp"

namespace ealab {

const char* to_string(DirectionKind k) { return k == DirectionKind::Constant ? "Constant" : "Radial"; }

const char* to_string(CausalType c) {
  switch (c) {
    case CausalType::Spacelike: return "spacelike";
    case CausalType::Timelike: return "timelike";
    case CausalType::Null: return "null";
  }
  return "unknown";
}

const char* to_string(Completeness c) {
  switch (c) {
    case Completeness::Complete: return "Complete";
    case Completeness::FutureIncomplete: return "FutureIncomplete";
    case Completeness::PastIncomplete: return "PastIncomplete";
    case Completeness::BothIncomplete: return "BothIncomplete";
    case Completeness::Undetermined: return "Undetermined";
  }
  return "Unknown";
}

Eigen::VectorXd sign_normalize(const Eigen::VectorXd& u, double tol) {
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) > tol) return u(i) > 0 ? u : Eigen::VectorXd(-u);
  }
  return u;
}

double projective_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return std::min((u - v).norm(), (u + v).norm());
}

CausalType causal_type(const MetricAlgebra& ma, const Eigen::VectorXd& v) {
  const double n2 = v.squaredNorm();
  if (n2 == 0.0) throw Error(ErrorKind::InvalidInput, "causal type of the zero vector");
  const double q = v.dot(ma.gram_d() * v);
  if (std::abs(q) <= 1e-9 * n2) return CausalType::Null;
  return q > 0 ? CausalType::Spacelike : CausalType::Timelike;
}

namespace {

constexpr double kRootResidual = 1e-9;   // accepted |G(u)| for a converged start
constexpr double kRadialLambda = 1e-7;   // |lambda| above this is Radial
// Roots on degenerate families converge only to ~1e-5 in position even when |G|
// is far below kRootResidual, so membership is judged loosely.
constexpr double kSpanMember = 1e-2;
constexpr double kSpanRootTol = 1e-5;    // |G| allowed on probe points of a candidate span

struct Root {
  Eigen::VectorXd u;
  double residual;
};

std::vector<Eigen::VectorXd> start_points(std::size_t dim, const SolverOptions& opts) {
  const std::size_t exponent = std::min<std::size_t>(dim - 1, 2);
  std::size_t grid = 1;
  for (std::size_t i = 0; i < exponent; ++i) grid *= opts.grid_density;
  std::vector<Eigen::VectorXd> starts = sphere_grid(dim, grid);
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t s = 0; s < opts.max_starts; ++s) {
    Eigen::VectorXd p(static_cast<Eigen::Index>(dim));
    for (auto& c : p) c = normal(rng);
    if (p.norm() < 1e-6) continue;
    starts.push_back(p.normalized());
  }
  return starts;
}

// Orthonormal basis (columns) of span(vectors), numerical rank cut at `tol`.
Eigen::MatrixXd span_basis(const std::vector<Eigen::VectorXd>& vectors, double tol = 1e-8) {
  const auto n = vectors.front().size();
  Eigen::MatrixXd m(n, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vectors[i];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  Eigen::Index r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > tol * svd.singularValues()(0)) ++r;
  return svd.matrixU().leftCols(r);
}

double distance_to_span(const Eigen::MatrixXd& basis, const Eigen::VectorXd& u) {
  return (u - basis * (basis.transpose() * u)).norm();
}

// True when every probe direction of span(basis) is a zero of the sphere field.
bool span_is_root_family(const MetricAlgebra& ma, const Eigen::MatrixXd& basis) {
  const auto d = basis.cols();
  std::vector<Eigen::VectorXd> probes;
  for (Eigen::Index i = 0; i < d; ++i) {
    probes.push_back(basis.col(i));
    for (Eigen::Index j = i + 1; j < d; ++j) {
      probes.push_back(basis.col(i) + basis.col(j));
      probes.push_back(basis.col(i) - 2.0 * basis.col(j));
    }
  }
  Eigen::VectorXd mix = Eigen::VectorXd::Zero(basis.rows());
  for (Eigen::Index i = 0; i < d; ++i) mix += (1.0 + 0.37 * static_cast<double>(i)) * basis.col(i);
  probes.push_back(mix);
  return std::all_of(probes.begin(), probes.end(), [&](const Eigen::VectorXd& p) {
    return sphere_field(ma, p.normalized()).norm() < kSpanRootTol;
  });
}

// Reduced echelon rows (leading entry 1) of an orthonormal basis: a canonical basis of the span.
std::vector<Eigen::VectorXd> echelon_rows(const Eigen::MatrixXd& basis) {
  Eigen::MatrixXd rows = basis.transpose();
  const auto d = rows.rows(), n = rows.cols();
  Eigen::Index lead = 0;
  for (Eigen::Index r = 0; r < d && lead < n; ++r, ++lead) {
    Eigen::Index piv = r;
    for (;;) {
      rows.col(lead).segment(r, d - r).cwiseAbs().maxCoeff(&piv);
      piv += r;
      if (std::abs(rows(piv, lead)) > kSpanMember) break;
      if (++lead == n) break;
    }
    if (lead == n) break;
    rows.row(r).swap(rows.row(piv));
    rows.row(r) /= rows(r, lead);
    for (Eigen::Index k = 0; k < d; ++k)
      if (k != r) rows.row(k) -= rows(k, lead) * rows.row(r);
  }
  std::vector<Eigen::VectorXd> out;
  for (Eigen::Index r = 0; r < d; ++r) out.push_back(rows.row(r).transpose());
  return out;
}

// Best rational with denominator <= max_den within tol of x (continued fractions).
std::optional<Rational> snap_rational(double x, long max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 40; ++it) {
    const double a = std::floor(r);
    if (std::abs(a) > 1e9) break;
    const long ai = static_cast<long>(a);
    const long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    if (std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) <= tol) return Rational(p1, q1);
    const double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

// Snaps echelon rows to small rationals and confirms exactly that the span is a
// family of constant directions (dim >= 2) or a single constant/radial line.
std::optional<std::vector<QVector>> exact_family(const MetricAlgebra& ma, const std::vector<Eigen::VectorXd>& rows) {
  std::vector<QVector> exact;
  for (const auto& row : rows) {
    QVector q;
    for (double c : row) {
      auto r = snap_rational(c, 64, 1e-4);
      if (!r) return std::nullopt;
      q.push_back(*r);
    }
    exact.push_back(std::move(q));
  }
  if (exact.size() == 1) {
    const QVector& b = exact.front();
    const QVector f = geodesic_field(ma, b);
    const Rational mu = dot(f, b) / dot(b, b);
    if (!is_zero(f - mu * b)) return std::nullopt;
    return exact;
  }
  for (std::size_t i = 0; i < exact.size(); ++i)
    for (std::size_t j = i; j < exact.size(); ++j)
      if (!is_zero(geodesic_polarization(ma, exact[i], exact[j]))) return std::nullopt;
  return exact;
}

struct Component {
  Eigen::MatrixXd basis;
  std::size_t members = 0;
};

// Splits one cluster into linear families: grow a span from an unassigned seed
// while the enlarged span still consists of roots, then claim every member near it.
std::vector<Component> peel_components(const MetricAlgebra& ma, const std::vector<Root>& cluster) {
  std::vector<Component> comps;
  std::vector<bool> assigned(cluster.size(), false);
  for (std::size_t seed = 0; seed < cluster.size(); ++seed) {
    if (assigned[seed]) continue;
    Eigen::MatrixXd basis = cluster[seed].u;
    for (;;) {
      std::vector<std::pair<double, std::size_t>> candidates;
      for (std::size_t i = 0; i < cluster.size(); ++i) {
        const double d = distance_to_span(basis, cluster[i].u);
        if (d > kSpanMember) candidates.emplace_back(d, i);
      }
      // Farthest first: a span through well-separated members is the least sensitive to member noise.
      std::sort(candidates.begin(), candidates.end(), std::greater<>());
      bool grown = false;
      for (const auto& [d, i] : candidates) {
        std::vector<Eigen::VectorXd> vs;
        for (Eigen::Index c = 0; c < basis.cols(); ++c) vs.push_back(basis.col(c));
        vs.push_back(cluster[i].u);
        Eigen::MatrixXd bigger = span_basis(vs);
        if (bigger.cols() == basis.cols() + 1 && span_is_root_family(ma, bigger)) {
          basis = bigger;
          grown = true;
          break;
        }
      }
      if (!grown) break;
    }
    Component comp{basis, 0};
    std::vector<Eigen::VectorXd> near;
    for (std::size_t i = 0; i < cluster.size(); ++i) {
      if (distance_to_span(basis, cluster[i].u) <= kSpanMember) {
        if (!assigned[i]) ++comp.members;
        assigned[i] = true;
        near.push_back(cluster[i].u);
      }
    }
    // Least-squares refit over every member near the span.
    {
      const auto d = basis.cols();
      Eigen::MatrixXd m(basis.rows(), static_cast<Eigen::Index>(near.size()));
      for (std::size_t i = 0; i < near.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = near[i];
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
      comp.basis = svd.matrixU().leftCols(d);
    }
    comps.push_back(std::move(comp));
  }
  return comps;
}

bool span_inside(const Eigen::MatrixXd& small, const Eigen::MatrixXd& big) {
  for (Eigen::Index k = 0; k < small.cols(); ++k)
    if (distance_to_span(big, small.col(k)) > kSpanMember) return false;
  return true;
}

// Components found from different clusters can describe the same span (a
// continuum split by gaps wider than the cluster radius), and an isolated line
// can sit inside a larger family. Both are folded into the first larger or
// earlier component that contains them.
std::vector<Component> merge_components(std::vector<Component> comps) {
  std::vector<bool> dropped(comps.size(), false);
  for (std::size_t a = 0; a < comps.size(); ++a) {
    for (std::size_t b = 0; b < comps.size(); ++b) {
      if (a == b || dropped[b]) continue;
      const auto da = comps[a].basis.cols(), db = comps[b].basis.cols();
      const bool absorbs = db > da || (db == da && b < a);
      if (absorbs && span_inside(comps[a].basis, comps[b].basis)) {
        comps[b].members += comps[a].members;
        dropped[a] = true;
        break;
      }
    }
  }
  std::vector<Component> kept;
  for (std::size_t a = 0; a < comps.size(); ++a)
    if (!dropped[a]) kept.push_back(std::move(comps[a]));
  return kept;
}

}  // namespace

std::vector<SpecialDirection> find_special_directions(const MetricAlgebra& ma, const SolverOptions& opts) {
  const std::size_t dim = ma.dim();
  if (dim < 2) throw Error(ErrorKind::InvalidInput, "special directions need dim >= 2");
  if (opts.grid_density == 0) throw Error(ErrorKind::InvalidInput, "grid_density must be positive");

  const std::vector<Eigen::VectorXd> starts = start_points(dim, opts);
  std::vector<SphereRoot> solved(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    solved[i] = newton_on_sphere(ma, starts[i], opts.newton_tol, opts.max_iterations);
  });

  std::vector<Root> roots;
  for (const SphereRoot& s : solved)
    if (std::isfinite(s.residual) && s.residual < kRootResidual) roots.push_back({sign_normalize(s.u), s.residual});

  // Single-linkage clustering in projective distance; labels follow first appearance.
  const double radius = 10.0 * std::numbers::pi / static_cast<double>(opts.grid_density);
  std::vector<std::size_t> label(roots.size(), SIZE_MAX);
  std::vector<std::vector<Root>> clusters;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (label[i] != SIZE_MAX) continue;
    const std::size_t id = clusters.size();
    clusters.emplace_back();
    std::vector<std::size_t> stack{i};
    label[i] = id;
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      clusters[id].push_back(roots[a]);
      for (std::size_t b = 0; b < roots.size(); ++b) {
        if (label[b] == SIZE_MAX && projective_distance(roots[a].u, roots[b].u) < radius) {
          label[b] = id;
          stack.push_back(b);
        }
      }
    }
  }

  std::vector<Component> comps;
  for (const auto& cluster : clusters) {
    for (Component& c : peel_components(ma, cluster)) comps.push_back(std::move(c));
  }

  std::vector<SpecialDirection> out;
  for (const Component& comp : merge_components(std::move(comps))) {
    SpecialDirection sd;
    const std::vector<Eigen::VectorXd> rows = echelon_rows(comp.basis);
    sd.component_dim = rows.size();
    sd.isolated = sd.component_dim == 1;
    sd.members = comp.members;
    if (auto exact = exact_family(ma, rows)) {
      QVector sum = zero_qvector(dim);
      for (const QVector& b : *exact) {
        sd.basis.push_back(sign_normalize(to_eigen(b).normalized()));
        sum = sum + b;
      }
      sd.v = sign_normalize(to_eigen(sum).normalized());
    } else {
      Eigen::VectorXd guess = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
      for (const auto& b : rows) {
        sd.basis.push_back(sign_normalize(b.normalized()));
        guess += b;
      }
      // Polish the representative; min-norm steps keep it on the family.
      const SphereRoot polished = newton_on_sphere(ma, guess.normalized(), opts.newton_tol, opts.max_iterations);
      sd.v = sign_normalize(polished.u);
    }
    const Eigen::VectorXd f = geodesic_field(ma, sd.v);
    sd.lambda = f.dot(sd.v);
    sd.residual = (f - sd.lambda * sd.v).norm();
    if (sd.residual >= kRootResidual) continue;  // failed re-verification
    sd.kind = std::abs(sd.lambda) > kRadialLambda ? DirectionKind::Radial : DirectionKind::Constant;
    if (sd.kind == DirectionKind::Constant) {
      sd.lambda = 0.0;
      sd.residual = f.norm();
      if (sd.residual >= kRootResidual) continue;
    }
    sd.causal_type = causal_type(ma, sd.v);
    out.push_back(std::move(sd));
  }

  std::sort(out.begin(), out.end(), [](const SpecialDirection& a, const SpecialDirection& b) {
    if (a.kind != b.kind) return a.kind == DirectionKind::Constant;
    for (Eigen::Index i = 0; i < a.v.size(); ++i) {
      if (std::abs(a.v(i) - b.v(i)) > 1e-9) return a.v(i) > b.v(i);
    }
    return false;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].component_id = i;
  return out;
}

// ---------------------------------------------------------------------------

std::optional<SigmaCriterion> sigma_criterion(const MetricAlgebra& ma) {
  const std::string& name = ma.algebra().name();
  if (name != "sl2" && name != "sol") return std::nullopt;
  if (!(ma.form() == builtin_metric(name))) return std::nullopt;
  if (name == "sl2") {
    return SigmaCriterion{make_qvector({Rational(3, 8), Rational(-1, 2), 1}),
                          {unit_qvector(3, 0), unit_qvector(3, 1)}};
  }
  return SigmaCriterion{unit_qvector(3, 2), {unit_qvector(3, 0), unit_qvector(3, 1)}};
}

namespace {

Completeness combine(bool future_blowup, bool past_blowup) {
  if (future_blowup && past_blowup) return Completeness::BothIncomplete;
  if (future_blowup) return Completeness::FutureIncomplete;
  if (past_blowup) return Completeness::PastIncomplete;
  return Completeness::Complete;
}

}  // namespace

CompletenessTag completeness_classify(const MetricAlgebra& ma, const Eigen::VectorXd& v,
                                      const CompletenessOptions& opts) {
  if (static_cast<std::size_t>(v.size()) != ma.dim())
    throw Error(ErrorKind::InvalidInput, "completeness_classify: length mismatch");
  if (v.norm() == 0.0) throw Error(ErrorKind::InvalidInput, "completeness_classify: zero vector");

  CompletenessTag tag;
  if (auto crit = sigma_criterion(ma)) {
    std::vector<QVector> cols = crit->complement;
    cols.push_back(crit->line);
    const Eigen::MatrixXd coords = inverse(from_columns(cols)).to_eigen();
    const double s = coords.row(coords.rows() - 1).dot(v);
    tag.used_sigma = true;
    tag.sigma = s;
    if (std::abs(s) <= 1e-12 * v.norm()) tag.sigma_verdict = Completeness::Complete;
    else tag.sigma_verdict = s > 0 ? Completeness::FutureIncomplete : Completeness::PastIncomplete;
  }

  IntegrateOptions io;
  io.tol = opts.tol;
  tag.forward = integrate(ma, v, opts.horizon, io);
  tag.backward = integrate(ma, v, -opts.horizon, io);
  tag.used_integration = true;
  const bool failed = tag.forward.termination == Termination::StepFailure ||
                      tag.backward.termination == Termination::StepFailure;
  if (!failed) {
    tag.integration_verdict = combine(tag.forward.termination == Termination::BlowupDetected,
                                      tag.backward.termination == Termination::BlowupDetected);
  }

  if (tag.sigma_verdict && tag.integration_verdict) {
    if (*tag.sigma_verdict == *tag.integration_verdict) {
      tag.value = *tag.sigma_verdict;
    } else {
      tag.value = Completeness::Undetermined;
      tag.diagnostic = std::string("sigma criterion says ") + to_string(*tag.sigma_verdict) +
                       ", integration says " + to_string(*tag.integration_verdict);
    }
  } else if (tag.integration_verdict) {
    tag.value = *tag.integration_verdict;
  } else if (tag.sigma_verdict) {
    tag.value = *tag.sigma_verdict;
    tag.used_integration = false;
    tag.diagnostic = "integration ended in StepFailure; verdict from the sigma criterion alone";
  } else {
    tag.value = Completeness::Undetermined;
    tag.diagnostic = "integration ended in StepFailure and no sigma criterion is registered";
  }
  return tag;
}

}  // namespace ealab
