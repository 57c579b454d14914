#include "romtopt/mma.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>

namespace romtopt {

namespace {

/// Separable subproblem data: sum_i p_i/(U_i - x_i) + q_i/(x_i - L_i) on [a_i, b_i].
struct Subproblem {
  Vector p, q, L, U, a, b;
  const Vector* w = nullptr;

  double slope(Eigen::Index i, double x, double lambda) const {
    const double du = U[i] - x;
    const double dl = x - L[i];
    return p[i] / (du * du) - q[i] / (dl * dl) + lambda * (*w)[i];
  }

  double argmin(Eigen::Index i, double lambda, double guess) const {
    if (slope(i, a[i], lambda) >= 0.0) return a[i];
    if (slope(i, b[i], lambda) <= 0.0) return b[i];
    auto fn = [&](double x) {
      const double du = U[i] - x;
      const double dl = x - L[i];
      return std::make_pair(slope(i, x, lambda), 2.0 * p[i] / (du * du * du) + 2.0 * q[i] / (dl * dl * dl));
    };
    std::uintmax_t it = 100;
    return boost::math::tools::newton_raphson_iterate(fn, std::clamp(guess, a[i], b[i]), a[i], b[i], 48, it);
  }

  Vector solve(double lambda, const Vector& guess) const {
    Vector x(p.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = argmin(i, lambda, guess[i]);
    return x;
  }
};

}  // namespace

void MmaParams::validate() const {
  if (!(asyinit > 0.0 && asyincr >= 1.0 && asydecr > 0.0 && asydecr <= 1.0)) {
    throw std::invalid_argument("invalid asymptote adaptation parameters");
  }
  if (!(move > 0.0 && move <= 1.0)) throw std::invalid_argument("move limit must lie in (0, 1]");
  if (!(asymin > 0.0 && asymin < asymax)) throw std::invalid_argument("invalid asymptote clipping range");
  if (!(albefa > 0.0 && albefa < 1.0)) throw std::invalid_argument("albefa must lie in (0, 1)");
}

bool is_feasible(const Vector& x, const VolumeConstraint& constraint, double tol) {
  if (x.size() != constraint.weights.size()) return false;
  if (!x.allFinite() || x.minCoeff() < -tol || x.maxCoeff() > 1.0 + tol) return false;
  return constraint.volume(x) <= constraint.limit + tol * std::max(1.0, std::abs(constraint.limit));
}

Mma::Mma(VolumeConstraint constraint, MmaParams params)
    : constraint_(std::move(constraint)), params_(params) {
  params_.validate();
  if (constraint_.weights.size() == 0 || constraint_.weights.minCoeff() < 0.0) {
    throw std::invalid_argument("volume weights must be non-empty and non-negative");
  }
}

void Mma::reset() {
  iter_ = 0;
  xold1_.resize(0);
  xold2_.resize(0);
  low_.resize(0);
  upp_.resize(0);
}

Vector Mma::step(const Vector& x, const Vector& grad, MmaStepInfo* info) {
  const Eigen::Index n = constraint_.weights.size();
  if (x.size() != n || grad.size() != n) throw std::invalid_argument("MMA vector size mismatch");
  if (!is_feasible(x, constraint_)) throw std::invalid_argument("MMA input is infeasible");
  if (!grad.allFinite()) throw std::invalid_argument("MMA gradient is not finite");

  ++iter_;
  const MmaParams& P = params_;
  if (iter_ <= 2) {
    low_ = x.array() - P.asyinit;
    upp_ = x.array() + P.asyinit;
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double zzz = (x[i] - xold1_[i]) * (xold1_[i] - xold2_[i]);
      const double factor = zzz > 0.0 ? P.asyincr : (zzz < 0.0 ? P.asydecr : 1.0);
      low_[i] = std::clamp(x[i] - factor * (xold1_[i] - low_[i]), x[i] - P.asymax, x[i] - P.asymin);
      upp_[i] = std::clamp(x[i] + factor * (upp_[i] - xold1_[i]), x[i] + P.asymin, x[i] + P.asymax);
    }
  }

  Subproblem sp;
  sp.w = &constraint_.weights;
  sp.L = low_;
  sp.U = upp_;
  sp.a.resize(n);
  sp.b.resize(n);
  sp.p.resize(n);
  sp.q.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sp.a[i] = std::max({0.0, low_[i] + P.albefa * (x[i] - low_[i]), x[i] - P.move});
    sp.b[i] = std::min({1.0, upp_[i] - P.albefa * (upp_[i] - x[i]), x[i] + P.move});
    const double ux = upp_[i] - x[i];
    const double xl = x[i] - low_[i];
    const double gp = std::max(grad[i], 0.0);
    const double gm = std::max(-grad[i], 0.0);
    const double pq = 0.001 * (gp + gm) + P.raa0;
    sp.p[i] = (gp + pq) * ux * ux;
    sp.q[i] = (gm + pq) * xl * xl;
  }

  const double V = constraint_.limit;
  auto excess = [&](double lambda) { return constraint_.volume(sp.solve(lambda, x)) - V; };

  MmaStepInfo local;
  Vector xnew = sp.solve(0.0, x);
  double vol = constraint_.volume(xnew);
  if (vol > V) {
    double hi = 1.0;
    while (excess(hi) > 0.0) {
      hi *= 4.0;
      if (hi > 1e300) throw std::runtime_error("MMA multiplier search failed to bracket");
    }
    std::uintmax_t it = 200;
    auto [lo_l, hi_l] = boost::math::tools::toms748_solve(excess, 0.0, hi, boost::math::tools::eps_tolerance<double>(50), it);
    (void)lo_l;
    local.multiplier = hi_l;
    local.multiplier_iterations = static_cast<int>(it);
    xnew = sp.solve(hi_l, x);
    vol = constraint_.volume(xnew);
    local.kkt_residual = std::abs(vol - V) / std::max(1.0, std::abs(V));
  } else {
    local.kkt_residual = 0.0;
  }
  local.volume = vol;

  xold2_ = xold1_.size() ? xold1_ : x;
  xold1_ = x;
  if (info) *info = local;
  return xnew;
}

}  // namespace romtopt
