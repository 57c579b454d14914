// romtopt: run, compare and export topology optimization benchmarks.

#include "romtopt/driver.hpp"
#include "romtopt/export.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace romtopt;

namespace {

struct CommonOptions {
  std::string config_file;
  std::vector<std::string> overrides;
  std::optional<double> tau;
  std::vector<double> eps;
  std::optional<int> max_iters;
  std::optional<int> n_max;
  std::optional<int> window;
  std::optional<double> nu;
  std::optional<std::uint64_t> seed;
  std::optional<int> snapshot_every;
  std::string reference_dir;
  std::string out = "out";
  bool no_reference_run = false;
  bool quiet = false;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--config", o.config_file, "key = value config file")->check(CLI::ExistingFile);
  app->add_option("--set", o.overrides, "config override key=value (repeatable)");
  app->add_option("--tau", o.tau, "initial trust-region radius multiplier");
  app->add_option("--eps", o.eps, "cutoff tolerances")->delimiter(',');
  app->add_option("--max-iters", o.max_iters, "major iteration cap");
  app->add_option("--nmax", o.n_max, "POD truncation cap");
  app->add_option("--window", o.window, "snapshot window length");
  app->add_option("--nu", o.nu, "ROM/HDM solve cost ratio");
  app->add_option("--seed", o.seed, "seed for the psi0 perturbation");
  app->add_option("--snapshot-every", o.snapshot_every, "write density images every N iterations");
  app->add_option("--reference-dir", o.reference_dir, "reference cache directory");
  app->add_option("--out", o.out, "output directory");
  app->add_flag("--no-reference-run", o.no_reference_run, "fail instead of computing a missing reference");
  app->add_flag("-q,--quiet", o.quiet, "no per-iteration output");
}

RunConfig make_config(const CommonOptions& o) {
  RunConfig cfg;
  if (!o.config_file.empty()) cfg.load_file(o.config_file);
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.tau) cfg.tr.tau = *o.tau;
  if (!o.eps.empty()) cfg.eps = o.eps;
  if (o.max_iters) cfg.max_iters = *o.max_iters;
  if (o.n_max) cfg.tr.n_max = *o.n_max;
  if (o.window) cfg.tr.window = *o.window;
  if (o.nu) cfg.cost_nu = *o.nu;
  if (o.seed) cfg.seed = *o.seed;
  if (o.snapshot_every) cfg.snapshot_every = *o.snapshot_every;
  if (!o.reference_dir.empty()) cfg.reference_dir = o.reference_dir;
  return cfg;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + p.string() + "'");
}

std::string run_file_text(const RunReport& r) {
  std::ostringstream os;
  char buf[128];
  os << "# problem=" << r.problem << "\n# method=" << r.method << "\n";
  std::snprintf(buf, sizeof buf, "# tau=%.17g\n# nu=%.17g\n# J_star=%.17g\n", r.tau, r.nu, r.J_star);
  os << buf;
  std::istringstream hdr(r.header);
  std::string line;
  while (std::getline(hdr, line)) os << "# " << line << "\n";
  os << run_log_csv(r);
  return os.str();
}

RunReport parse_run_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open '" + p.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  RunReport r;
  std::istringstream lines(ss.str());
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("# ", 0) != 0) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(2, eq - 2);
    const std::string val = line.substr(eq + 1);
    if (key == "problem") r.problem = val;
    else if (key == "method") r.method = val;
    else if (key == "tau") r.tau = std::stod(val);
    else if (key == "nu") r.nu = std::stod(val);
    else if (key == "J_star") r.J_star = std::stod(val);
  }
  r.log = parse_run_log_csv(ss.str());
  return r;
}

RunHooks make_hooks(const RunConfig& cfg, const StructuredMesh& mesh, const fs::path& dir,
                    const std::string& prefix, bool quiet) {
  RunHooks hooks;
  if (!quiet) {
    hooks.on_iteration = [](const IterationLog& it) {
      std::printf("  n=%4d  J=%.6f  hdm=%ld  rom=%ld  delta=%.3e  ratio=%+.3f  basis=%d\n", it.n, it.J, it.hdm,
                  it.rom, it.delta, it.ratio, it.basis);
      std::fflush(stdout);
    };
  }
  if (cfg.snapshot_every > 0) {
    const int every = cfg.snapshot_every;
    hooks.on_design = [every, mesh, dir, prefix](int n, const Vector&, const PhysicalDensity& d) {
      if (n % every != 0) return;
      char name[64];
      std::snprintf(name, sizeof name, "density_%04d", n);
      write_pgm(d.rho, mesh.nx(), mesh.ny(), (dir / (prefix + name + ".pgm")).string());
      write_vtk(d.rho, mesh, (dir / (prefix + name + ".vtk")).string());
    };
  }
  return hooks;
}

RunReport run_one(const std::string& problem, const std::string& method, const RunConfig& cfg,
                  const CommonOptions& o, const fs::path& dir, const std::string& prefix) {
  const ProblemSpec spec = builtin_problem(problem);
  const StructuredMesh mesh(spec.nx, spec.ny, spec.h);
  RunOptions opts;
  opts.config = cfg;
  opts.allow_reference_run = !o.no_reference_run;
  opts.hooks = make_hooks(cfg, mesh, dir, prefix, o.quiet);
  std::printf("%s / %s\n", problem.c_str(), method.c_str());
  RunReport r = run(spec, parse_method(method), opts);
  write_file(dir / (prefix + "run.csv"), run_file_text(r));
  if (r.final_rho.size() > 0) {
    write_pgm(r.final_rho, mesh.nx(), mesh.ny(), (dir / (prefix + "final.pgm")).string());
    write_vtk(r.final_rho, mesh, (dir / (prefix + "final.vtk")).string());
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topology optimization with ROM-accelerated trust-region methods"};
  app.require_subcommand(1);

  CommonOptions run_o;
  std::string run_problem = "mbb";
  std::string run_method = "rom-tr-res";
  auto* run_cmd = app.add_subcommand("run", "run one method on one problem");
  run_cmd->add_option("--problem", run_problem, "mbb | mbb-small | cantilever | ssbeam");
  run_cmd->add_option("--method", run_method, "hdm-mma | rom-tr-res | rom-tr-dist | rom-fix-res");
  add_common(run_cmd, run_o);

  CommonOptions bench_o;
  std::vector<std::string> bench_problems = {"mbb", "cantilever", "ssbeam"};
  std::vector<std::string> bench_methods = {"hdm-mma", "rom-tr-res", "rom-tr-dist"};
  auto* bench_cmd = app.add_subcommand("bench", "run a problem x method matrix");
  bench_cmd->add_option("--problem", bench_problems, "problems")->delimiter(',');
  bench_cmd->add_option("--method", bench_methods, "methods")->delimiter(',');
  add_common(bench_cmd, bench_o);

  std::string exp_input, exp_output, exp_format = "pgm";
  double exp_h = 1.0;
  auto* export_cmd = app.add_subcommand("export", "convert a density CSV to PGM or VTK");
  export_cmd->add_option("input", exp_input, "density CSV")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("output", exp_output, "output file")->required();
  export_cmd->add_option("--format", exp_format, "pgm | vtk | csv");
  export_cmd->add_option("--spacing", exp_h, "element size for VTK spacing");

  std::vector<std::string> table_runs;
  std::vector<double> table_eps = {0.01, 0.001};
  std::string table_csv;
  auto* table_cmd = app.add_subcommand("table", "tabulate cutoff counts of run.csv files");
  table_cmd->add_option("runs", table_runs, "run.csv files")->required()->check(CLI::ExistingFile);
  table_cmd->add_option("--eps", table_eps, "cutoff tolerances")->delimiter(',');
  table_cmd->add_option("--csv", table_csv, "also write the table as CSV");

  CommonOptions ref_o;
  std::vector<std::string> ref_problems = {"mbb", "cantilever", "ssbeam"};
  auto* ref_cmd = app.add_subcommand("reference", "compute and cache reference optima J*");
  ref_cmd->add_option("--problem", ref_problems, "problems")->delimiter(',');
  add_common(ref_cmd, ref_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const RunConfig cfg = make_config(run_o);
      fs::create_directories(run_o.out);
      write_file(fs::path(run_o.out) / "config.txt", cfg.dump());
      const RunReport r = run_one(run_problem, run_method, cfg, run_o, run_o.out, "");
      write_file(fs::path(run_o.out) / "table.csv", report_table_csv({r}, cfg.eps));
      std::printf("\n%s", r.header.c_str());
      std::printf("J* = %.6f\n\n%s", r.J_star, report_table({r}, cfg.eps).c_str());
    } else if (*bench_cmd) {
      const RunConfig cfg = make_config(bench_o);
      fs::create_directories(bench_o.out);
      write_file(fs::path(bench_o.out) / "config.txt", cfg.dump());
      std::vector<RunReport> reports;
      for (const auto& p : bench_problems) {
        for (const auto& m : bench_methods) {
          reports.push_back(run_one(p, m, cfg, bench_o, bench_o.out, p + "-" + m + "-"));
        }
      }
      write_file(fs::path(bench_o.out) / "table.csv", report_table_csv(reports, cfg.eps));
      std::printf("\n%s", report_table(reports, cfg.eps).c_str());
    } else if (*export_cmd) {
      const DensityGrid g = read_csv(exp_input);
      const StructuredMesh mesh(g.nx, g.ny, exp_h);
      export_density(g.rho, mesh, exp_output, parse_export_format(exp_format));
    } else if (*table_cmd) {
      std::vector<RunReport> reports;
      for (const auto& f : table_runs) reports.push_back(parse_run_file(f));
      std::printf("%s", report_table(reports, table_eps).c_str());
      if (!table_csv.empty()) write_file(table_csv, report_table_csv(reports, table_eps));
    } else if (*ref_cmd) {
      const RunConfig cfg = make_config(ref_o);
      for (const auto& p : ref_problems) {
        const ProblemSpec spec = builtin_problem(p);
        RunHooks hooks;
        if (!ref_o.quiet) {
          hooks.on_iteration = [](const IterationLog& it) {
            if (it.n % 100 == 0) std::printf("  n=%4d  J=%.6f\n", it.n, it.J), std::fflush(stdout);
          };
        }
        const ReferenceResult ref = reference_run(spec, cfg, true, hooks);
        std::printf("%s: J* = %.6f (%s%s)\n", p.c_str(), ref.J_star, ref.from_cache ? "cached " : "",
                    ref.path.c_str());
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
