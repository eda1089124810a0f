// ealab: command-line front end.
//
// Exit codes: 0 success, 1 a verification check failed, 2 usage or input error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "ealab/checks.hpp"
#include "ealab/error.hpp"
#include "ealab/flow.hpp"
#include "ealab/json_io.hpp"
#include "ealab/lattice.hpp"
#include "ealab/metric.hpp"
#include "ealab/report.hpp"
#include "ealab/solver.hpp"

namespace {

using namespace ealab;

constexpr int kOk = 0;
constexpr int kCheckFailure = 1;
constexpr int kUsage = 2;

struct Config {
  std::string algebra;
  std::string metric;
  std::string at;
  std::string out;
  std::string filter;
  double tol = 1e-10;
  double horizon = 100.0;
  std::uint64_t seed = 0;
  std::size_t grid_density = 64;
  std::size_t count = 100;
  std::size_t samples = 64;
  std::int64_t bound = 10;
  bool json = false;
  bool parallel = false;
  bool list = false;
  bool horizon_given = false;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool is_builtin(const std::string& name) {
  for (const auto& b : builtin_names())
    if (b == name) return true;
  return false;
}

MetricAlgebra resolve(const Config& cfg) {
  if (cfg.algebra.empty()) throw UsageError("no algebra given (builtin name or JSON path)");
  const bool builtin = is_builtin(cfg.algebra);
  if (!builtin && !std::filesystem::exists(cfg.algebra))
    throw UsageError("'" + cfg.algebra + "' is neither a builtin algebra nor a readable file");
  LieAlgebra alg = builtin ? load_builtin(cfg.algebra) : load_algebra_file(cfg.algebra);

  if (cfg.metric.empty() || cfg.metric == "default") {
    if (builtin) return load_metric_algebra(cfg.algebra);
    if (!cfg.metric.empty()) throw UsageError("'default' metric exists only for builtin algebras");
    try {
      return killing_metric_algebra(alg);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateForm) throw;
      throw UsageError("the Killing form of " + alg.name() + " is degenerate; pass --metric");
    }
  }
  if (cfg.metric == "killing") return killing_metric_algebra(alg);
  if (!std::filesystem::exists(cfg.metric))
    throw UsageError("metric '" + cfg.metric + "' is neither default, killing, nor a readable file");
  BilinearForm form = load_metric_file(cfg.metric, alg.dim());
  return MetricAlgebra(std::move(alg), std::move(form), std::filesystem::path(cfg.metric).stem().string());
}

QVector parse_point(const std::string& text, std::size_t dim) {
  if (text.empty()) throw UsageError("--at is required");
  QVector v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(parse_rational(item));
    } catch (const Error& e) {
      throw UsageError(std::string("--at: ") + e.what());
    }
  }
  if (v.size() != dim)
    throw UsageError("--at has " + std::to_string(v.size()) + " components, algebra dimension is " +
                     std::to_string(dim));
  return v;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string tuple(const QVector& v) {
  std::vector<std::string> parts;
  for (const auto& q : v) parts.push_back(to_string(q));
  return "(" + join(parts, ", ") + ")";
}

std::string tuple(const Eigen::VectorXd& v, int precision = 6) {
  std::vector<std::string> parts;
  for (double x : v) {
    std::ostringstream os;
    os.precision(precision);
    os << x;
    parts.push_back(os.str());
  }
  return "(" + join(parts, ", ") + ")";
}

void print_matrix(std::ostream& os, const QMatrix& m, const std::string& indent) {
  std::vector<std::vector<std::string>> cells(m.rows());
  std::size_t width = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      cells[i].push_back(to_string(m(i, j)));
      width = std::max(width, cells[i].back().size());
    }
  for (const auto& row : cells) {
    os << indent;
    for (const auto& c : row) os << std::string(width + 1 - c.size(), ' ') << c;
    os << '\n';
  }
}

std::string combination(const LieAlgebra& alg, const QVector& coeffs) {
  std::string out;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0) continue;
    const Rational c = coeffs[k];
    const bool neg = c < 0;
    const Rational mag = neg ? Rational(-c) : c;
    out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
    if (mag != 1) out += to_string(mag) + " ";
    out += alg.basis_names()[k];
  }
  return out.empty() ? "0" : out;
}

int cmd_info(const Config& cfg, std::ostream& os) {
  const MetricAlgebra ma = resolve(cfg);
  if (cfg.json) {
    os << dump(info_json(ma));
    return kOk;
  }
  const LieAlgebra& alg = ma.algebra();
  os << "algebra " << alg.name() << "\n";
  os << "dim " << alg.dim() << "\n";
  os << "basis " << join(alg.basis_names(), ",") << "\n";
  os << "brackets\n";
  for (std::size_t i = 0; i < alg.dim(); ++i)
    for (std::size_t j = i + 1; j < alg.dim(); ++j) {
      const QVector c = bracket(alg, unit_qvector(alg.dim(), i), unit_qvector(alg.dim(), j));
      if (is_zero(c)) continue;
      os << "  [" << alg.basis_names()[i] << "," << alg.basis_names()[j] << "] = " << combination(alg, c) << "\n";
    }
  os << "jacobi residual " << to_string(jacobi_residual(alg)) << "\n";
  os << "killing form\n";
  print_matrix(os, killing_form(alg), "  ");
  const Inertia in = inertia(ma.form());
  os << "metric " << ma.metric_name() << " inertia (+" << in.positive << ",-" << in.negative << ",0:" << in.zero
     << ")\n";
  print_matrix(os, ma.form().gram(), "  ");
  os << "biinvariance residual " << to_string(biinvariance_residual(ma)) << "\n";
  return kOk;
}

int cmd_adstar(const Config& cfg, std::ostream& os) {
  const MetricAlgebra ma = resolve(cfg);
  if (cfg.json) {
    os << dump(adstar_json(ma));
    return kOk;
  }
  for (std::size_t i = 0; i < ma.dim(); ++i) {
    const std::string& b = ma.algebra().basis_names()[i];
    os << "ad_" << b << "\n";
    print_matrix(os, ma.ad(i), "  ");
    os << "ad*_" << b << "\n";
    print_matrix(os, ma.adstar(i), "  ");
  }
  return kOk;
}

int cmd_field(const Config& cfg, std::ostream& os) {
  const MetricAlgebra ma = resolve(cfg);
  const QVector x = parse_point(cfg.at, ma.dim());
  if (cfg.json) {
    os << dump(field_json(ma, x));
    return kOk;
  }
  os << "F" << tuple(x) << " = " << tuple(geodesic_field(ma, x)) << "\n";
  return kOk;
}

int cmd_integrate(const Config& cfg, std::ostream& os) {
  const MetricAlgebra ma = resolve(cfg);
  const Eigen::VectorXd x0 = to_eigen(parse_point(cfg.at, ma.dim()));
  IntegrateOptions opts;
  opts.tol = cfg.tol;
  const Trajectory traj = integrate(ma, x0, cfg.horizon, opts);
  const Json meta = trajectory_meta_json(ma, x0, cfg.horizon, opts, traj);
  if (!cfg.out.empty()) {
    // CSV goes to --out (the stream passed in); metadata lands next to it.
    write_trajectory_csv(os, ma, traj);
    std::ofstream side(cfg.out + ".meta.json", std::ios::binary);
    if (!side) throw UsageError("cannot write " + cfg.out + ".meta.json");
    side << dump(meta);
  } else if (cfg.json) {
    os << dump(meta);
  } else {
    write_trajectory_csv(os, ma, traj);
    std::cerr << dump(meta);
  }
  return kOk;
}

int cmd_radial(const Config& cfg, std::ostream& os) {
  const MetricAlgebra ma = resolve(cfg);
  SolverOptions opts;
  opts.grid_density = cfg.grid_density;
  opts.seed = cfg.seed;
  const auto dirs = find_special_directions(ma, opts);
  if (cfg.json) {
    os << dump(radial_json(dirs));
    return kOk;
  }
  os << "id kind      lambda        causal     isolated dim residual    v\n";
  for (const auto& d : dirs) {
    char line[160];
    std::snprintf(line, sizeof line, "%-2zu %-9s %-13.6g %-10s %-8s %-3zu %-11.3g ", d.component_id,
                  to_string(d.kind), d.lambda, to_string(d.causal_type), d.isolated ? "yes" : "no", d.component_dim,
                  d.residual);
    os << line << tuple(d.v) << "\n";
  }
  return kOk;
}

int cmd_sphere_orbits(const Config& cfg, std::ostream& os) {
  const MetricAlgebra ma = resolve(cfg);
  if (ma.dim() < 2) throw UsageError("sphere-orbits needs dimension at least 2");
  const std::size_t n = ma.dim();
  std::size_t grid = 1;
  for (std::size_t k = 0; k < std::min<std::size_t>(n - 1, 2); ++k) grid *= cfg.grid_density;
  OrbitOptions opts;
  opts.tol = cfg.tol;
  if (cfg.horizon_given) opts.horizon = cfg.horizon;
  opts.keep_samples = cfg.samples;
  opts.fixed_points = sphere_fixed_points(ma, grid, opts.eps_fix);

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  std::vector<Eigen::VectorXd> starts;
  while (starts.size() < cfg.count) {
    Eigen::VectorXd u(static_cast<Eigen::Index>(n));
    for (auto& x : u) x = normal(rng);
    if (u.norm() < 1e-8) continue;
    starts.push_back(u.normalized());
  }
  const auto orbits = classify_sphere_orbits(ma, starts, opts);
  if (cfg.json) {
    os << dump(portrait_json(starts, orbits, opts.fixed_points));
    return kOk;
  }
  os << "fixed points " << opts.fixed_points.size() << "\n";
  for (const auto& p : opts.fixed_points) os << "  " << tuple(p) << "\n";
  std::map<std::string, std::size_t> tally;
  for (const auto& o : orbits) ++tally[to_string(o.kind)];
  os << "orbits " << orbits.size() << "\n";
  for (const auto& [kind, count] : tally) os << "  " << kind << " " << count << "\n";
  return kOk;
}

int cmd_complete(const Config& cfg, std::ostream& os) {
  const MetricAlgebra ma = resolve(cfg);
  const Eigen::VectorXd v = to_eigen(parse_point(cfg.at, ma.dim()));
  CompletenessOptions opts;
  opts.tol = cfg.tol;
  if (cfg.horizon_given) opts.horizon = cfg.horizon;
  const CompletenessTag tag = completeness_classify(ma, v, opts);
  if (cfg.json) {
    os << dump(completeness_json(ma, v, tag));
    return kOk;
  }
  os << "v " << tuple(v) << "\n";
  os << "verdict " << to_string(tag.value) << "\n";
  if (tag.sigma)
    os << "sigma " << *tag.sigma << " -> " << to_string(*tag.sigma_verdict) << "\n";
  if (tag.integration_verdict) os << "integration -> " << to_string(*tag.integration_verdict) << "\n";
  auto run = [&](const char* name, const Trajectory& t) {
    os << name << " " << to_string(t.termination);
    if (t.blowup_time) os << " at t=" << *t.blowup_time;
    os << "\n";
  };
  run("forward", tag.forward);
  run("backward", tag.backward);
  if (!tag.diagnostic.empty()) os << "note " << tag.diagnostic << "\n";
  return kOk;
}

int cmd_verify(const Config& cfg, std::ostream& os) {
  if (cfg.list) {
    for (const auto& c : list_checks()) os << c.id << "  " << c.claim << "\n";
    return kOk;
  }
  const auto results = run_checks(cfg.filter, cfg.parallel);
  if (results.empty()) throw UsageError("no check id starts with '" + cfg.filter + "'");
  bool ok = true;
  for (const auto& r : results) ok = ok && r.passed;
  if (cfg.json) {
    os << dump(checks_json(results));
  } else {
    std::size_t failed = 0;
    for (const auto& r : results) {
      char line[128];
      std::snprintf(line, sizeof line, "%-4s %-22s res=%-11.3g tol=%-9.3g ", r.passed ? "PASS" : "FAIL",
                    r.id.c_str(), r.residual, r.tolerance);
      os << line << r.claim << "\n";
      if (!r.passed) {
        ++failed;
        os << "     " << r.detail << "\n";
      }
    }
    os << results.size() - failed << "/" << results.size() << " checks passed\n";
  }
  return ok ? kOk : kCheckFailure;
}

int cmd_lattice(const Config& cfg, std::ostream& os) {
  const auto candidates = enumerate_candidates(cfg.bound);
  std::vector<LoxodromicCertificate> certs;
  std::vector<LatticeData> lattices;
  for (const auto& q : candidates) {
    certs.push_back(certify(q));
    lattices.push_back(build_gamma(certs.back()));
  }
  if (cfg.json) {
    os << dump(lattice_json(cfg.bound, certs, lattices));
    return kOk;
  }
  os << "   a    b  lambda       alpha        residual\n";
  for (const auto& c : certs) {
    char line[128];
    std::snprintf(line, sizeof line, "%4lld %4lld  %-12.9g %-12.9g %.3g\n", static_cast<long long>(c.quartic.a),
                  static_cast<long long>(c.quartic.b), c.lambda, c.alpha, c.residual);
    os << line;
  }
  os << certs.size() << " candidates\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  CLI::App app{"Euler-Arnold geodesic flows on low-dimensional Lie groups"};
  app.require_subcommand(1, 1);
  app.add_option("--algebra", cfg.algebra, "builtin algebra (sl2, sol, euc, sol_euc) or JSON path");
  app.add_option("--metric", cfg.metric, "default, killing, or a metric JSON path");
  app.add_option("--tol", cfg.tol, "integration tolerance")->capture_default_str();
  auto* horizon = app.add_option("--horizon", cfg.horizon, "integration horizon")->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--grid-density", cfg.grid_density, "solver and fixed-point grid density")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_flag("--json", cfg.json, "machine-readable output");
  app.add_option("--out", cfg.out, "write output to this path");

  using Handler = int (*)(const Config&, std::ostream&);
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto command = [&](const char* name, const char* help, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    commands.emplace_back(sub, h);
    return sub;
  };
  auto with_algebra = [&](CLI::App* sub) { sub->add_option("algebra", cfg.algebra, "same as --algebra"); };
  auto with_point = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--at", cfg.at, "comma-separated coordinates, e.g. 3/8,-1/2,1");
    if (required) o->required();
  };

  with_algebra(command("info", "structure constants, Killing form, metric", cmd_info));
  with_algebra(command("adstar", "ad and ad* of each basis vector", cmd_adstar));
  auto* field = command("field", "geodesic field F(x) in exact arithmetic", cmd_field);
  with_algebra(field);
  with_point(field, true);
  auto* integ = command("integrate", "integrate x' = F(x); CSV trajectory", cmd_integrate);
  with_algebra(integ);
  with_point(integ, true);
  with_algebra(command("radial", "constant and radial directions", cmd_radial));
  auto* orbits = command("sphere-orbits", "classify seeded orbits of the spherized flow", cmd_sphere_orbits);
  with_algebra(orbits);
  orbits->add_option("--count", cfg.count, "number of orbits")->capture_default_str();
  orbits->add_option("--samples", cfg.samples, "path samples kept per orbit")->capture_default_str();
  auto* complete = command("complete", "completeness of the geodesic through v", cmd_complete);
  with_algebra(complete);
  with_point(complete, true);
  auto* verify = command("verify", "run the verification checks", cmd_verify);
  verify->add_option("filter", cfg.filter, "check id prefix");
  verify->add_flag("--parallel", cfg.parallel, "run checks concurrently");
  verify->add_flag("--list", cfg.list, "list check ids and claims");
  auto* lattice = command("lattice-search", "reciprocal quartics and lattice certificates", cmd_lattice);
  lattice->add_option("--bound", cfg.bound, "coefficient bound")->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  cfg.horizon_given = horizon->count() > 0;

  try {
    std::ofstream file;
    if (!cfg.out.empty()) {
      file.open(cfg.out, std::ios::binary);
      if (!file) throw UsageError("cannot write " + cfg.out);
    }
    std::ostream& os = cfg.out.empty() ? std::cout : file;
    for (const auto& [sub, handler] : commands)
      if (sub->parsed()) return handler(cfg, os);
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
