#pragma once

#include "romtopt/mma.hpp"

namespace romtopt {

/// Euclidean projection onto C = [0,1]^n intersected with {w^T x <= V}.
///
/// The projection is clip(y - lambda w, 0, 1) with the smallest lambda >= 0
/// meeting the volume constraint. Requires w >= 0 and V >= 0.
Vector project(const Vector& y, const VolumeConstraint& constraint, double* multiplier = nullptr);

/// ||x - P_C(x - g)||_2.
double termination_measure(const Vector& x, const Vector& grad, const VolumeConstraint& constraint);

struct Criticality {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// |min <g, d>| over x + d in C, ||d|| <= 1.
///
/// The minimizer lies on the projected-gradient path d(t) = P_C(x - t g) - x,
/// whose length is nondecreasing in t; t is located by bisection so that
/// ||d(t)|| = 1, or taken to infinity if the path stays inside the ball.
Criticality criticality_chi(const Vector& x, const Vector& grad, const VolumeConstraint& constraint,
                            double tol = 1e-8, int max_iters = 10000);

}  // namespace romtopt
