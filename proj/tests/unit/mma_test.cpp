#include "fixtures.hpp"
#include "romtopt/mma.hpp"

#include <gtest/gtest.h>

#include <limits>

using namespace romtopt;

namespace {

VolumeConstraint unit_weights(int n, double limit) { return {Vector::Ones(n), limit}; }

}  // namespace

TEST(Mma, ZeroGradientKeepsDesign) {
  Mma mma(unit_weights(4, 2.0));
  const Vector x = (Vector(4) << 0.1, 0.4, 0.6, 0.9).finished();
  EXPECT_LT((mma.step(x, Vector::Zero(4)) - x).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(Mma, LinearObjectiveOnSimplexSlice) {
  // F = x1 + x2 subject to x1 + x2 <= 1: MMA moves both variables down by the move limit.
  Mma mma(unit_weights(2, 1.0));
  Vector x = Vector::Constant(2, 0.5);
  const Vector g = Vector::Ones(2);
  double prev = x.sum();
  for (int k = 0; k < 10; ++k) {
    x = mma.step(x, g);
    EXPECT_LE(x.sum(), prev + 1e-15);
    EXPECT_TRUE(is_feasible(x, mma.constraint()));
    prev = x.sum();
  }
  EXPECT_LT(x.maxCoeff(), 1e-3);
}

TEST(Mma, VolumeBindsForDecreasingObjective) {
  // F = -sum c_i x_i with c > 0: the volume constraint becomes active.
  std::mt19937_64 rng(1);
  const Vector c = oracle::uniform(rng, 20, 0.5, 2.0);
  Mma mma(unit_weights(20, 7.0));
  Vector x = Vector::Constant(20, 0.35);
  MmaStepInfo info;
  for (int k = 0; k < 30; ++k) {
    x = mma.step(x, -c, &info);
    EXPECT_TRUE(is_feasible(x, mma.constraint()));
  }
  EXPECT_NEAR(x.sum(), 7.0, 1e-9);
  EXPECT_GT(info.multiplier, 0.0);
}

TEST(Mma, AsymptotesBracketIterate) {
  auto p = fixtures::toy(8, 4);
  Mma mma(p.volume);
  Vector x = p.psi0;
  for (int k = 0; k < 8; ++k) {
    const HdmSolution s = p.model->solve(x, *p.objective);
    const Vector g = p.model->gradient(x, s, *p.objective);
    const Vector xn = mma.step(x, g);
    EXPECT_TRUE(((mma.lower_asymptotes() - x).array() <= -mma.params().asymin + 1e-15).all());
    EXPECT_TRUE(((mma.upper_asymptotes() - x).array() >= mma.params().asymin - 1e-15).all());
    EXPECT_LE((xn - x).lpNorm<Eigen::Infinity>(), mma.params().move + 1e-15);
    x = xn;
  }
  EXPECT_EQ(mma.iterations(), 8);
  mma.reset();
  EXPECT_EQ(mma.iterations(), 0);
}

TEST(Mma, RejectsBadInput) {
  Mma mma(unit_weights(3, 1.0));
  EXPECT_THROW(mma.step(Vector::Constant(3, 0.5), Vector::Ones(3)), std::invalid_argument);
  EXPECT_THROW(mma.step((Vector(3) << -0.1, 0.2, 0.2).finished(), Vector::Ones(3)), std::invalid_argument);
  Vector g = Vector::Ones(3);
  g[1] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(mma.step(Vector::Constant(3, 0.2), g), std::invalid_argument);
  EXPECT_THROW(mma.step(Vector::Constant(2, 0.2), Vector::Ones(2)), std::invalid_argument);
}

TEST(Mma, ParameterValidation) {
  MmaParams p;
  p.move = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.asydecr = 1.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Mma, MbbSmallKeepsVolumeActive) {
  auto p = build_problem(builtin_problem("mbb-small"));
  Mma mma(p.volume);
  Vector x = p.psi0;
  double J0 = 0.0;
  double J = 0.0;
  for (int k = 0; k < 10; ++k) {
    const HdmSolution s = p.model->solve(x, *p.objective);
    if (k == 0) J0 = s.J;
    J = s.J;
    MmaStepInfo info;
    x = mma.step(x, p.model->gradient(x, s, *p.objective), &info);
    EXPECT_NEAR(p.volume.volume(x), p.volume.limit, 1e-9 * p.volume.limit) << k;
    EXPECT_LT(info.kkt_residual, 1e-10);
    EXPECT_GE(x.minCoeff(), 0.0);
    EXPECT_LE(x.maxCoeff(), 1.0);
  }
  EXPECT_LT(J, 0.5 * J0);
}
