#pragma once

#include "romtopt/elasticity.hpp"
#include "romtopt/mma.hpp"
#include "romtopt/rom.hpp"

#include <functional>
#include <optional>
#include <string>

namespace romtopt {

enum class TrConstraintKind { Residual, Distance };

std::string to_string(TrConstraintKind kind);

struct TrConfig {
  double gamma1 = 0.5;
  double gamma2 = 1.0;
  double eta1 = 0.1;
  double eta2 = 0.75;
  double delta_max_factor = 100.0;
  double tau = 0.1;
  TrConstraintKind kind = TrConstraintKind::Residual;
  /// false: fixed radius, every candidate accepted.
  bool adaptive = true;
  double termination_tol = 1e-6;
  int max_inner = 50;
  /// Pull-back halvings when the first inner step leaves the region (0: return the center).
  int backtrack_steps = 30;
  /// Start each subproblem's MMA from the state that produced the accepted center.
  bool warm_start_mma = true;
  /// Inner MMA iterations stop once the step is smaller than this (max norm).
  double inner_step_tol = 1e-10;
  int n_max = 19;
  int window = 20;
  /// Add the snapshot computed at a rejected candidate to the window.
  bool push_rejected = true;
  double degenerate_decrease = 1e-14;
  bool check_assumptions = true;
  /// Throw when the center gaps exceed the tolerances (adaptive runs only).
  bool enforce_assumptions = true;
  double assumption_value_tol = 1e-8;
  double assumption_grad_tol = 1e-6;
  double center_residual_tol = 1e-9;
  bool monitor_fcd = true;
  double fcd_kappa = 1e-4;
  double fcd_kappa_prime = 1.0;
  MmaParams mma;

  void validate() const;
};

/// Initial radius: tau ||f|| (residual of the zero state) or tau ||psi0||.
double initial_radius(TrConstraintKind kind, const Vector& psi0, const Vector& load, double tau);

/// theta_k(psi): full-space ROM residual norm, or distance to the center.
double tr_constraint(TrConstraintKind kind, const ReducedBasis& basis, const Vector& psi,
                     const Vector& center_psi, const RomSolution& rom_solution);

/// Model value, gradient and (for the residual constraint) residual norm at one design.
struct ModelPoint {
  double value = 0.0;
  Vector grad;
  double residual = 0.0;
};
using ModelFunction = std::function<ModelPoint(const Vector&)>;

struct SubproblemResult {
  Vector psi;
  double model_value = 0.0;
  double theta = 0.0;
  int steps = 0;           ///< MMA steps taken
  int model_evaluations = 0;
  bool boundary_hit = false;
  int backtracks = 0;      ///< halvings of a first step that left the region
  /// MMA state after the step that produced `psi` (empty if psi is the center).
  std::optional<Mma> state;
  /// 1 + largest |g_{i+1} - g_i| / |x_{i+1} - x_i| along the MMA path.
  double curvature = 1.0;
};

/// Runs MMA on the model over C without the trust-region constraint and
/// stops at the first iterate with theta > delta. Returns the last iterate
/// inside the trust region, or the best one seen if the last is worse. For
/// the distance constraint theta is checked before the model is evaluated.
///
/// If the first MMA step already leaves the region, it is pulled back along
/// its direction: scaled onto the sphere for the distance constraint, halved
/// up to `backtrack_steps` times for the residual constraint. With
/// backtrack_steps = 0 the center is returned instead. MMA starts from
/// `warm` (asymptotes and history) when given, otherwise from scratch.
SubproblemResult solve_subproblem(const ModelFunction& model, const Vector& center,
                                  const ModelPoint& center_point, const VolumeConstraint& constraint,
                                  TrConstraintKind kind, double delta, int max_inner,
                                  const MmaParams& mma, double step_tol = 1e-10, int backtrack_steps = 30,
                                  const Mma* warm = nullptr);

struct TrIterationRecord {
  int k = 0;
  double delta = 0.0;
  double J_center = 0.0;
  double J_candidate = 0.0;
  double model_center = 0.0;
  double model_candidate = 0.0;
  double ratio = 0.0;
  bool accepted = false;
  double theta = 0.0;
  int basis_size = 0;
  int inner_steps = 0;
  int rom_solves = 0;
  long hdm_total = 0;
  long rom_total = 0;
  double termination = 0.0;
  double center_value_gap = 0.0;
  double center_grad_gap = 0.0;
  double center_residual = 0.0;
  double fcd_decrease = 0.0;
  double fcd_required = 0.0;
  double chi = 0.0;
  Vector candidate;
};

/// Error-aware trust-region method with Galerkin ROM models.
///
/// Each major iteration builds a reduced basis from the snapshot window and
/// the center state, approximately minimizes the ROM objective with truncated
/// MMA, and evaluates the candidate with one HDM solve. An accepted
/// candidate's HDM state becomes the next center without another solve.
class TrustRegionOptimizer {
 public:
  TrustRegionOptimizer(const ElasticityModel& model, const Objective& objective,
                       VolumeConstraint constraint, Vector psi0, TrConfig config);

  TrIterationRecord iterate();

  int iteration() const { return k_; }
  double radius() const { return delta_; }
  double initial_radius() const { return delta0_; }
  double max_radius() const { return delta_max_; }
  const Vector& center() const { return center_; }
  const HdmSolution& center_solution() const { return center_sol_; }
  const Vector& center_gradient() const { return center_grad_; }
  double termination_value() const;
  bool converged() const { return termination_value() < config_.termination_tol; }
  const TrConfig& config() const { return config_; }
  const VolumeConstraint& constraint() const { return constraint_; }

 private:
  const ElasticityModel& model_;
  const Objective& objective_;
  VolumeConstraint constraint_;
  TrConfig config_;
  SnapshotWindow window_;
  int k_ = 0;
  double delta0_ = 0.0;
  double delta_ = 0.0;
  double delta_max_ = 0.0;
  Vector center_;
  HdmSolution center_sol_;
  Vector center_grad_;
  std::optional<Mma> mma_state_;
};

}  // namespace romtopt
