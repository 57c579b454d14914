#include "romtopt/driver.hpp"

#include "romtopt/export.hpp"
#include "romtopt/projection.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace romtopt {

namespace {

namespace fs = std::filesystem;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string hex(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool reached(double J, double J_star, double eps) {
  return eps > 0.0 && J_star == J_star && std::abs(J - J_star) < eps * std::abs(J_star);
}

}  // namespace

TopOptProblem prepare_problem(const ProblemSpec& spec, const RunConfig& config) {
  TopOptProblem p = build_problem(config.apply(spec));
  if (config.psi0_noise > 0.0) {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> dist(-config.psi0_noise, config.psi0_noise);
    for (Eigen::Index e = 0; e < p.psi0.size(); ++e) p.psi0[e] += dist(rng);
    p.psi0 = project(p.psi0, p.volume);
  }
  return p;
}

RunReport hdm_mma_driver(TopOptProblem& problem, int max_iters, double tol, const MmaParams& params,
                         const RunHooks& hooks) {
  const auto t0 = std::chrono::steady_clock::now();
  const ElasticityModel& model = *problem.model;
  const Objective& objective = *problem.objective;
  problem.stats->reset();
  RunReport report;
  report.problem = problem.spec.name;
  report.method = to_string(Method::HdmMma);
  report.header = problem.spec.describe();

  Mma mma(problem.volume, params);
  Vector psi = is_feasible(problem.psi0, problem.volume) ? problem.psi0 : project(problem.psi0, problem.volume);
  for (int n = 0;; ++n) {
    const HdmSolution sol = model.solve(psi, objective);
    const Vector g = model.gradient(psi, sol, objective);
    IterationLog it;
    it.n = n;
    it.J = sol.J;
    it.hdm = problem.stats->hdm_solves;
    it.rom = problem.stats->rom_solves;
    it.termination = termination_measure(psi, g, problem.volume);
    it.volume = problem.volume.volume(psi);
    report.log.push_back(it);
    if (hooks.on_iteration) hooks.on_iteration(it);
    if (hooks.on_design) hooks.on_design(n, psi, sol.density);
    if (n >= max_iters || it.termination < tol) {
      report.final_psi = psi;
      report.final_rho = sol.density.rho;
      break;
    }
    psi = mma.step(psi, g);
  }
  report.wall_seconds = seconds_since(t0);
  return report;
}

RunReport trust_region_driver(TopOptProblem& problem, const TrConfig& config, int max_iters, double J_star,
                              double stop_eps, const RunHooks& hooks) {
  const auto t0 = std::chrono::steady_clock::now();
  problem.stats->reset();
  RunReport report;
  report.problem = problem.spec.name;
  report.method = !config.adaptive ? "rom-fix-res"
                                   : (config.kind == TrConstraintKind::Residual ? "rom-tr-res" : "rom-tr-dist");
  report.tau = config.tau;
  report.header = problem.spec.describe();

  TrustRegionOptimizer tr(*problem.model, *problem.objective, problem.volume, problem.psi0, config);
  auto log_center = [&](int n, const TrIterationRecord* rec) {
    IterationLog it;
    it.n = n;
    it.J = tr.center_solution().J;
    it.hdm = problem.stats->hdm_solves;
    it.rom = problem.stats->rom_solves;
    it.delta = rec ? rec->delta : tr.radius();
    if (rec) {
      it.ratio = rec->ratio;
      it.accepted = rec->accepted ? 1 : 0;
      it.theta = rec->theta;
      it.basis = rec->basis_size;
    }
    it.termination = tr.termination_value();
    it.volume = problem.volume.volume(tr.center());
    report.log.push_back(it);
    if (hooks.on_iteration) hooks.on_iteration(it);
    if (hooks.on_design) hooks.on_design(n, tr.center(), tr.center_solution().density);
    return it;
  };

  IterationLog last = log_center(0, nullptr);
  for (int k = 0; k < max_iters; ++k) {
    if (reached(last.J, J_star, stop_eps) || last.termination < config.termination_tol) break;
    const TrIterationRecord rec = tr.iterate();
    last = log_center(k + 1, &rec);
  }
  report.final_psi = tr.center();
  report.final_rho = tr.center_solution().density.rho;
  report.wall_seconds = seconds_since(t0);
  return report;
}

ReferenceResult reference_run(const ProblemSpec& spec, const RunConfig& config, bool allow_compute,
                              const RunHooks& hooks) {
  const ProblemSpec applied = config.apply(spec);
  const fs::path dir(config.reference_dir);
  const fs::path path = dir / (spec.name + "-" + hex(config.reference_hash(spec)) + ".csv");
  ReferenceResult out;
  out.path = path.string();
  if (fs::exists(path) && !hooks.on_design) {
    out.log = parse_run_log_csv(read_text(path));
    if (static_cast<int>(out.log.size()) == config.reference_iters + 1) {
      out.J_star = out.log.back().J;
      out.from_cache = true;
      return out;
    }
  }
  if (!allow_compute) {
    throw std::runtime_error("missing reference file '" + path.string() +
                             "' (run the reference verb or drop --no-reference-run)");
  }
  TopOptProblem problem = prepare_problem(spec, config);
  RunReport rep = hdm_mma_driver(problem, config.reference_iters, 0.0, config.tr.mma, hooks);
  rep.header = applied.describe();
  out.log = rep.log;
  out.J_star = out.log.back().J;
  fs::create_directories(dir);
  {
    std::ofstream f(path);
    std::istringstream hdr(rep.header);
    std::string line;
    while (std::getline(hdr, line)) f << "# " << line << '\n';
    f << run_log_csv(rep);
    if (!f) throw std::runtime_error("failed writing reference file '" + path.string() + "'");
  }
  write_csv(rep.final_rho, problem.spec.nx, problem.spec.ny, (dir / (spec.name + "-" + hex(config.reference_hash(spec)) + ".rho.csv")).string());
  return out;
}

RunReport run(const ProblemSpec& spec, Method method, const RunOptions& options) {
  const RunConfig& cfg = options.config;
  double min_eps = 0.0;
  for (double e : cfg.eps) min_eps = min_eps == 0.0 ? e : std::min(min_eps, e);

  if (method == Method::HdmMma) {
    const ReferenceResult ref = reference_run(spec, cfg, options.allow_reference_run, options.hooks);
    RunReport report;
    report.problem = spec.name;
    report.method = to_string(method);
    report.nu = cfg.cost_nu;
    report.header = cfg.apply(spec).describe();
    report.log = ref.log;
    report.J_star = ref.J_star;
    report.cutoffs = compute_cutoffs(report.log, report.J_star, cfg.eps, cfg.cost_nu);
    return report;
  }

  const double J_star = reference_run(spec, cfg, options.allow_reference_run).J_star;

  TrConfig tr = cfg.tr;
  tr.kind = method == Method::RomTrDist ? TrConstraintKind::Distance : TrConstraintKind::Residual;
  tr.adaptive = method != Method::RomFixRes;
  TopOptProblem problem = prepare_problem(spec, cfg);
  RunReport report = trust_region_driver(problem, tr, cfg.max_iters, J_star,
                                         cfg.stop_at_cutoff ? min_eps : 0.0, options.hooks);
  report.nu = cfg.cost_nu;
  report.J_star = J_star;
  if (report.has_reference()) report.cutoffs = compute_cutoffs(report.log, J_star, cfg.eps, cfg.cost_nu);
  return report;
}

}  // namespace romtopt
