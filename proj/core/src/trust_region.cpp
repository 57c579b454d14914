#include "romtopt/trust_region.hpp"

#include "romtopt/projection.hpp"

#include <cmath>
#include <limits>

namespace romtopt {

std::string to_string(TrConstraintKind kind) {
  return kind == TrConstraintKind::Residual ? "residual" : "distance";
}

void TrConfig::validate() const {
  if (!(gamma1 > 0.0 && gamma1 <= gamma2 && gamma2 <= 1.0)) {
    throw std::invalid_argument("trust region requires 0 < gamma1 <= gamma2 <= 1");
  }
  if (!(eta1 > 0.0 && eta1 < eta2 && eta2 < 1.0)) {
    throw std::invalid_argument("trust region requires 0 < eta1 < eta2 < 1");
  }
  if (!(delta_max_factor >= 1.0)) throw std::invalid_argument("delta_max_factor must be >= 1");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (max_inner < 1) throw std::invalid_argument("max_inner must be >= 1");
  if (backtrack_steps < 0) throw std::invalid_argument("backtrack_steps must be >= 0");
  if (n_max < 0 || window < 1) throw std::invalid_argument("invalid snapshot window settings");
  mma.validate();
}

double initial_radius(TrConstraintKind kind, const Vector& psi0, const Vector& load, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  return tau * (kind == TrConstraintKind::Residual ? load.norm() : psi0.norm());
}

double tr_constraint(TrConstraintKind kind, const ReducedBasis& basis, const Vector& psi,
                     const Vector& center_psi, const RomSolution& rom_solution) {
  if (kind == TrConstraintKind::Distance) return (psi - center_psi).norm();
  if (hash_vector(psi) != rom_solution.psi_hash) {
    throw StaleStateError("reduced solution was computed for a different design");
  }
  return residual_norm(basis, rom_solution);
}

SubproblemResult solve_subproblem(const ModelFunction& model, const Vector& center,
                                  const ModelPoint& center_point, const VolumeConstraint& constraint,
                                  TrConstraintKind kind, double delta, int max_inner,
                                  const MmaParams& mma_params, double step_tol, int backtrack_steps,
                                  const Mma* warm) {
  SubproblemResult out;
  out.psi = center;
  out.model_value = center_point.value;
  out.theta = kind == TrConstraintKind::Distance ? 0.0 : center_point.residual;

  Mma mma = warm ? *warm : Mma(constraint, mma_params);
  std::optional<Mma> best_state;
  Vector x = center;
  Vector g = center_point.grad;
  double best = center_point.value;
  Vector best_x = center;
  double best_theta = out.theta;
  double last = center_point.value;
  for (int s = 0; s < max_inner; ++s) {
    Vector xn = mma.step(x, g);
    ++out.steps;
    double theta = 0.0;
    if (kind == TrConstraintKind::Distance) {
      theta = (xn - center).norm();
      if (theta > delta) {
        out.boundary_hit = true;
        if (s > 0 || backtrack_steps <= 0) break;
        xn = center + (delta / theta) * (1.0 - 1e-14) * (xn - center);
        theta = (xn - center).norm();
        ++out.backtracks;
        s = max_inner;
      }
    }
    ModelPoint p = model(xn);
    ++out.model_evaluations;
    if (kind == TrConstraintKind::Residual && p.residual > delta) {
      out.boundary_hit = true;
      if (s > 0) break;
      // First step already outside: halve along the MMA direction.
      const Vector d = xn - center;
      double t = 1.0;
      int b = 0;
      for (; b < backtrack_steps && p.residual > delta; ++b) {
        t *= 0.5;
        xn = center + t * d;
        p = model(xn);
        ++out.model_evaluations;
      }
      out.backtracks = b;
      if (p.residual > delta) break;
      s = max_inner;
    }
    if (kind == TrConstraintKind::Residual) theta = p.residual;
    const double dx = (xn - x).norm();
    if (dx > 0.0) out.curvature = std::max(out.curvature, 1.0 + (p.grad - g).norm() / dx);
    const double step = (xn - x).lpNorm<Eigen::Infinity>();
    out.psi = xn;
    out.model_value = p.value;
    out.theta = theta;
    out.state = mma;
    last = p.value;
    if (p.value < best) {
      best = p.value;
      best_x = xn;
      best_theta = theta;
      best_state = mma;
    }
    x = xn;
    g = p.grad;
    if (step < step_tol) break;
  }
  if (best < last) {
    out.psi = best_x;
    out.model_value = best;
    out.theta = best_theta;
    out.state = best_state;
  }
  return out;
}

TrustRegionOptimizer::TrustRegionOptimizer(const ElasticityModel& model, const Objective& objective,
                                           VolumeConstraint constraint, Vector psi0, TrConfig config)
    : model_(model),
      objective_(objective),
      constraint_(std::move(constraint)),
      config_(config),
      window_(config.window) {
  config_.validate();
  if (psi0.size() != model.elem_count()) throw std::invalid_argument("initial design size mismatch");
  center_ = is_feasible(psi0, constraint_) ? std::move(psi0) : project(psi0, constraint_);
  center_sol_ = model_.solve(center_, objective_);
  center_grad_ = model_.gradient(center_, center_sol_, objective_);
  window_.push(center_sol_.u, center_sol_.lambda);
  delta0_ = romtopt::initial_radius(config_.kind, center_, model_.load(), config_.tau);
  delta_ = delta0_;
  delta_max_ = config_.delta_max_factor * delta0_;
}

double TrustRegionOptimizer::termination_value() const {
  return termination_measure(center_, center_grad_, constraint_);
}

TrIterationRecord TrustRegionOptimizer::iterate() {
  TrIterationRecord rec;
  rec.k = k_;
  rec.delta = delta_;
  rec.J_center = center_sol_.J;
  rec.termination = termination_value();
  SolveStats& stats = model_.stats();
  const long rom_before = stats.rom_solves;

  const ReducedBasis basis = build_basis(model_, window_, center_sol_.u, center_sol_.lambda,
                                         objective_.is_compliance(), config_.n_max);
  rec.basis_size = basis.size();

  const bool need_residual = config_.kind == TrConstraintKind::Residual || config_.check_assumptions;
  auto evaluate = [&](const Vector& psi, bool with_residual) {
    const RomSolution sol = rom_solve(basis, psi, objective_);
    ModelPoint p;
    p.value = sol.J;
    p.grad = rom_gradient(basis, psi, sol, objective_);
    if (with_residual) p.residual = residual_norm(basis, sol);
    return p;
  };

  const ModelPoint center_point = evaluate(center_, need_residual);
  rec.model_center = center_point.value;
  rec.center_value_gap = std::abs(center_point.value - center_sol_.J);
  rec.center_grad_gap = (center_point.grad - center_grad_).norm();
  rec.center_residual = center_point.residual;
  if (config_.check_assumptions && config_.enforce_assumptions && config_.adaptive) {
    const double fnorm = model_.load().norm();
    if (rec.center_value_gap > config_.assumption_value_tol * std::abs(center_sol_.J) ||
        rec.center_grad_gap > config_.assumption_grad_tol * center_grad_.norm() ||
        rec.center_residual > config_.center_residual_tol * fnorm) {
      throw std::logic_error("reduced model is not exact at the trust-region center (iteration " +
                             std::to_string(k_) + ")");
    }
  }

  const SubproblemResult sub = solve_subproblem(
      [&](const Vector& psi) { return evaluate(psi, config_.kind == TrConstraintKind::Residual); },
      center_, center_point, constraint_, config_.kind, delta_, config_.max_inner, config_.mma,
      config_.inner_step_tol, config_.backtrack_steps, mma_state_ ? &*mma_state_ : nullptr);
  rec.inner_steps = sub.steps;
  rec.model_candidate = sub.model_value;
  rec.theta = sub.theta;
  rec.candidate = sub.psi;

  const double predicted = center_point.value - sub.model_value;
  rec.fcd_decrease = predicted;
  if (config_.monitor_fcd) {
    rec.chi = criticality_chi(center_, center_point.grad, constraint_).value;
    rec.fcd_required = config_.fcd_kappa * rec.chi *
                       std::min({rec.chi / sub.curvature, config_.fcd_kappa_prime * delta_, 1.0});
  }

  const bool moved = (sub.psi - center_).lpNorm<Eigen::Infinity>() > 0.0;
  std::optional<HdmSolution> cand;
  if (moved) {
    cand = model_.solve(sub.psi, objective_);
    rec.J_candidate = cand->J;
  } else {
    rec.J_candidate = center_sol_.J;
  }

  bool success = false;
  if (predicted > config_.degenerate_decrease && cand) {
    rec.ratio = (center_sol_.J - cand->J) / predicted;
    success = rec.ratio >= config_.eta1;
  } else {
    rec.ratio = 0.0;
  }

  if (config_.adaptive) {
    rec.accepted = success;
    if (!success) {
      delta_ = config_.gamma1 * delta_;
    } else if (rec.ratio < config_.eta2) {
      delta_ = config_.gamma2 * delta_;
    } else {
      delta_ = std::min(2.0 * delta_, delta_max_);
    }
  } else {
    rec.accepted = cand.has_value();
  }

  if (rec.accepted) {
    center_ = sub.psi;
    center_sol_ = std::move(*cand);
    center_grad_ = model_.gradient(center_, center_sol_, objective_);
    window_.push(center_sol_.u, center_sol_.lambda);
    if (config_.warm_start_mma) mma_state_ = sub.state;
  } else if (cand && config_.push_rejected) {
    window_.push(cand->u, cand->lambda);
  }

  ++k_;
  rec.rom_solves = static_cast<int>(stats.rom_solves - rom_before);
  rec.hdm_total = stats.hdm_solves;
  rec.rom_total = stats.rom_solves;
  return rec;
}

}  // namespace romtopt
