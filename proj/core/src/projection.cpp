#include "romtopt/projection.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>

namespace romtopt {

namespace {

Vector clip_shift(const Vector& y, const Vector& w, double lambda) {
  return (y - lambda * w).cwiseMax(0.0).cwiseMin(1.0);
}

}  // namespace

Vector project(const Vector& y, const VolumeConstraint& constraint, double* multiplier) {
  const Vector& w = constraint.weights;
  const double V = constraint.limit;
  if (y.size() != w.size()) throw std::invalid_argument("projection size mismatch");
  if (!(V >= 0.0) || w.minCoeff() < 0.0) throw std::invalid_argument("projection requires w >= 0 and V >= 0");

  Vector x = clip_shift(y, w, 0.0);
  if (multiplier) *multiplier = 0.0;
  if (w.dot(x) <= V) return x;

  auto excess = [&](double lambda) { return w.dot(clip_shift(y, w, lambda)) - V; };
  double hi = 1.0;
  while (excess(hi) > 0.0) {
    hi *= 4.0;
    if (hi > 1e300) throw std::runtime_error("projection multiplier search failed to bracket");
  }
  std::uintmax_t it = 300;
  const auto bracket = boost::math::tools::toms748_solve(excess, 0.0, hi, boost::math::tools::eps_tolerance<double>(52), it);
  double lambda = bracket.second;

  // Refine on the active set at the bracketed multiplier, where the volume is
  // affine in lambda.
  x = clip_shift(y, w, lambda);
  double free_ww = 0.0;
  double fixed_vol = 0.0;
  double free_wy = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double z = y[i] - lambda * w[i];
    if (z <= 0.0) continue;
    if (z >= 1.0) {
      fixed_vol += w[i];
    } else {
      free_ww += w[i] * w[i];
      free_wy += w[i] * y[i];
    }
  }
  if (free_ww > 0.0) {
    const double exact = (fixed_vol + free_wy - V) / free_ww;
    const Vector xe = clip_shift(y, w, exact);
    if (exact >= 0.0 && w.dot(xe) <= V + 1e-14 * std::max(1.0, V) &&
        std::abs(exact - lambda) <= 1e-6 * std::max(1.0, lambda)) {
      lambda = exact;
      x = xe;
    }
  }
  if (multiplier) *multiplier = lambda;
  return x;
}

double termination_measure(const Vector& x, const Vector& grad, const VolumeConstraint& constraint) {
  return (x - project(x - grad, constraint)).norm();
}

Criticality criticality_chi(const Vector& x, const Vector& grad, const VolumeConstraint& constraint,
                            double tol, int max_iters) {
  Criticality out;
  auto path = [&](double t) -> Vector { return project(x - t * grad, constraint) - x; };
  const double gnorm = grad.norm();
  if (gnorm == 0.0) {
    out.converged = true;
    return out;
  }
  double lo = 0.0;
  double hi = 1.0 / gnorm;
  Vector d = path(hi);
  int it = 0;
  while (d.norm() < 1.0 && it < max_iters) {
    lo = hi;
    hi *= 2.0;
    ++it;
    const Vector dn = path(hi);
    if ((dn - d).norm() <= 1e-15 && hi > 1e6 / gnorm) {
      // The path has reached a vertex of C without leaving the ball.
      out.value = std::abs(grad.dot(dn));
      out.iterations = it;
      out.converged = true;
      return out;
    }
    d = dn;
  }
  while (it < max_iters) {
    ++it;
    const double mid = 0.5 * (lo + hi);
    const Vector dm = path(mid);
    const double len = dm.norm();
    if (len > 1.0) {
      hi = mid;
    } else {
      lo = mid;
      d = dm;
    }
    if (std::abs(len - 1.0) <= tol || hi - lo <= 1e-15 * hi) {
      if (len <= 1.0) d = dm;
      out.converged = true;
      break;
    }
  }
  if (d.norm() > 1.0) d = path(lo);
  out.value = std::abs(std::min(0.0, grad.dot(d)));
  out.iterations = it;
  return out;
}

}  // namespace romtopt
