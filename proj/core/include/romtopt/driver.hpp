#pragma once

#include "romtopt/config.hpp"
#include "romtopt/report.hpp"

#include <functional>

namespace romtopt {

/// Called with the design and filtered density after major iteration n.
using DesignCallback = std::function<void(int n, const Vector& psi, const PhysicalDensity& density)>;
using IterationCallback = std::function<void(const IterationLog&)>;

struct RunHooks {
  DesignCallback on_design;
  IterationCallback on_iteration;
};

/// MMA on the full-order problem: one HDM solve and gradient per iteration.
/// Runs `max_iters` MMA steps (log entries 0..max_iters) unless the
/// termination measure falls below `tol` first.
RunReport hdm_mma_driver(TopOptProblem& problem, int max_iters, double tol, const MmaParams& params,
                         const RunHooks& hooks = {});

/// Trust-region run with ROM models; stops after `max_iters` major
/// iterations, on convergence, or (with `stop_eps` > 0 and a finite J*)
/// once |J - J*| < stop_eps |J*|.
RunReport trust_region_driver(TopOptProblem& problem, const TrConfig& config, int max_iters,
                              double J_star = std::numeric_limits<double>::quiet_NaN(),
                              double stop_eps = 0.0, const RunHooks& hooks = {});

struct ReferenceResult {
  double J_star = 0.0;
  std::vector<IterationLog> log;
  bool from_cache = false;
  std::string path;
};

/// Reference optimum J* = J after `config.reference_iters` HDM-MMA iterations,
/// cached in `config.reference_dir` keyed by `config.reference_hash(spec)`.
/// Throws if the cache is missing and `allow_compute` is false.
ReferenceResult reference_run(const ProblemSpec& spec, const RunConfig& config, bool allow_compute,
                              const RunHooks& hooks = {});

/// Problem with config overrides applied and the optional seeded psi0 perturbation.
TopOptProblem prepare_problem(const ProblemSpec& spec, const RunConfig& config);

struct RunOptions {
  RunConfig config;
  bool allow_reference_run = true;
  RunHooks hooks;
};

/// Runs one method. HDM-MMA reports the reference run itself.
RunReport run(const ProblemSpec& spec, Method method, const RunOptions& options);

}  // namespace romtopt
