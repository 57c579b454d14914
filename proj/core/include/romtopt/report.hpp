#pragma once

#include "romtopt/types.hpp"

#include <limits>
#include <string>
#include <vector>

namespace romtopt {

/// State after major iteration n (n = 0 is the initial design).
struct IterationLog {
  int n = 0;
  double J = 0.0;
  long hdm = 0;  ///< cumulative HDM solves when J was known
  long rom = 0;  ///< cumulative ROM solves
  double delta = 0.0;
  double ratio = 0.0;
  int accepted = -1;  ///< -1 when not applicable
  double theta = 0.0;
  int basis = 0;
  double termination = 0.0;
  double volume = 0.0;
};

struct CutoffResult {
  double eps = 0.0;
  bool reached = false;
  int iteration = -1;
  long n_hdm = 0;
  long n_rom = 0;
  double cost = 0.0;
  double J = 0.0;
};

struct RunReport {
  std::string problem;
  std::string method;
  double tau = 0.0;
  double nu = 0.01;
  std::string header;  ///< geometry and modelling assumptions
  std::vector<IterationLog> log;
  double J_star = std::numeric_limits<double>::quiet_NaN();
  std::vector<CutoffResult> cutoffs;
  double wall_seconds = 0.0;
  Vector final_psi;
  Vector final_rho;

  bool has_reference() const { return J_star == J_star; }
  double final_J() const { return log.empty() ? std::numeric_limits<double>::quiet_NaN() : log.back().J; }
  const CutoffResult* cutoff(double eps) const;
};

/// C = N_HDM + nu N_ROM.
double equivalent_cost(long n_hdm, long n_rom, double nu);

/// First n with |J_n - J*| < eps |J*| for each eps.
std::vector<CutoffResult> compute_cutoffs(const std::vector<IterationLog>& log, double J_star,
                                          const std::vector<double>& eps, double nu);

/// Per-iteration CSV. Contains no timing, so identical runs give identical bytes.
std::string run_log_csv(const RunReport& report);
std::vector<IterationLog> parse_run_log_csv(const std::string& text);

/// Columns: problem, method, eps, tau, final objective, #HDM, #ROM, cost.
std::string report_table_csv(const std::vector<RunReport>& reports, const std::vector<double>& eps);
/// The same rows as an aligned text table.
std::string report_table(const std::vector<RunReport>& reports, const std::vector<double>& eps);

}  // namespace romtopt
