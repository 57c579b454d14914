#pragma once

#include "romtopt/types.hpp"

namespace romtopt {

/// Moving-asymptote parameters. Asymptote distances are multiples of the
/// variable range (here always 1).
struct MmaParams {
  double asyinit = 0.5;
  double asyincr = 1.2;
  double asydecr = 0.7;
  double move = 0.2;
  double asymin = 0.01;
  double asymax = 10.0;
  double albefa = 0.1;
  double raa0 = 1e-5;

  void validate() const;
};

/// Linear volume constraint w^T x <= limit.
struct VolumeConstraint {
  Vector weights;
  double limit = 0.0;

  double volume(const Vector& x) const { return weights.dot(x); }
};

struct MmaStepInfo {
  double multiplier = 0.0;
  double volume = 0.0;
  /// Relative complementarity residual of the volume constraint.
  double kkt_residual = 0.0;
  int multiplier_iterations = 0;
};

/// Method of moving asymptotes for min F(x) over [0,1]^n with one linear
/// volume constraint.
///
/// The objective is replaced by the usual separable convex rational
/// approximation; the volume constraint is kept linear. The subproblem is
/// solved through its one-dimensional dual: each variable's minimizer for a
/// given multiplier is a monotone scalar root, and the multiplier is found
/// by a bracketing root search on the volume.
class Mma {
 public:
  explicit Mma(VolumeConstraint constraint, MmaParams params = {});

  /// One major iteration from feasible `x` with objective gradient `grad`.
  Vector step(const Vector& x, const Vector& grad, MmaStepInfo* info = nullptr);

  void reset();
  int iterations() const { return iter_; }
  const Vector& lower_asymptotes() const { return low_; }
  const Vector& upper_asymptotes() const { return upp_; }
  const VolumeConstraint& constraint() const { return constraint_; }
  const MmaParams& params() const { return params_; }

  /// Feasibility tolerance used for inputs and outputs.
  static constexpr double kFeasibilityTolerance = 1e-10;

 private:
  VolumeConstraint constraint_;
  MmaParams params_;
  int iter_ = 0;
  Vector xold1_;
  Vector xold2_;
  Vector low_;
  Vector upp_;
};

bool is_feasible(const Vector& x, const VolumeConstraint& constraint, double tol = Mma::kFeasibilityTolerance);

}  // namespace romtopt
