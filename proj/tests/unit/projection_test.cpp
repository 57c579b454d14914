#include "fixtures.hpp"
#include "romtopt/projection.hpp"

#include <gtest/gtest.h>

using namespace romtopt;

TEST(Projection, MatchesActiveSetEnumeration) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const Vector y = oracle::uniform(rng, 5, -0.5, 1.5);
    const Vector w = oracle::uniform(rng, 5, 0.1, 2.0);
    const double V = U(rng) * w.sum();
    const VolumeConstraint c{w, V};
    const Vector x = project(y, c);
    const Vector ref = oracle::projection_by_enumeration(y, w, V);
    EXPECT_LT((x - ref).lpNorm<Eigen::Infinity>(), 1e-8) << t;
  }
}

TEST(Projection, IdentityOnFeasiblePoints) {
  const VolumeConstraint c{Vector::Ones(4), 2.0};
  const Vector x = (Vector(4) << 0.1, 0.7, 0.2, 0.5).finished();
  double mult = -1.0;
  EXPECT_EQ(project(x, c, &mult), x);
  EXPECT_EQ(mult, 0.0);
}

TEST(Projection, ZeroVolume) {
  const VolumeConstraint c{Vector::Ones(3), 0.0};
  EXPECT_LT(project(Vector::Constant(3, 0.8), c).norm(), 1e-12);
}

TEST(TerminationMeasure, ZeroGradient) {
  const VolumeConstraint c{Vector::Ones(3), 1.5};
  EXPECT_EQ(termination_measure(Vector::Constant(3, 0.4), Vector::Zero(3), c), 0.0);
}

TEST(TerminationMeasure, InteriorPointGivesGradientNorm) {
  const VolumeConstraint c{Vector::Ones(3), 2.0};
  const Vector g = (Vector(3) << 0.01, -0.02, 0.015).finished();
  EXPECT_NEAR(termination_measure(Vector::Constant(3, 0.5), g, c), g.norm(), 1e-15);
}

TEST(Criticality, UnitStepInsideSetGivesGradientNorm) {
  // x - g / |g| = (0.4, 0.8, 0.5) is feasible, so d = -g / |g|.
  const VolumeConstraint c{Vector::Ones(3), 2.0};
  const Vector x = (Vector(3) << 1.0, 0.0, 0.5).finished();
  const Vector g = (Vector(3) << 0.006, -0.008, 0.0).finished();
  const Criticality chi = criticality_chi(x, g, c);
  EXPECT_TRUE(chi.converged);
  EXPECT_NEAR(chi.value, g.norm(), 1e-8);
}

TEST(Criticality, PathInsideBallReachesSetBoundary) {
  // The projected path ends at (0, 1, 0) with |d| < 1: chi = -g.(d) = 0.0225.
  const VolumeConstraint c{Vector::Ones(3), 2.0};
  const Vector g = (Vector(3) << 0.01, -0.02, 0.015).finished();
  EXPECT_NEAR(criticality_chi(Vector::Constant(3, 0.5), g, c).value, 0.0225, 1e-8);
}

TEST(Criticality, BlockedComponentExcluded) {
  // x1 sits at its upper bound and g1 < 0 pushes it outward; only x2 can
  // move, down to 0: chi = 0.5 * 0.004.
  const VolumeConstraint c{Vector::Ones(2), 2.0};
  const Vector x = (Vector(2) << 1.0, 0.5).finished();
  const Vector g = (Vector(2) << -3.0, 0.004).finished();
  EXPECT_NEAR(criticality_chi(x, g, c).value, 0.002, 1e-8);
}

TEST(Criticality, ZeroAtKktPoint) {
  // min -x1 - x2 + x3 over x1 + x2 + x3 <= 1: KKT at (1/2, 1/2, 0) with multiplier 1.
  const VolumeConstraint c{Vector::Ones(3), 1.0};
  const Vector x = (Vector(3) << 0.5, 0.5, 0.0).finished();
  const Vector g = (Vector(3) << -1.0, -1.0, 1.0).finished();
  EXPECT_LT(criticality_chi(x, g, c).value, 1e-8);
  EXPECT_LT(termination_measure(x, g, c), 1e-12);
}

TEST(Criticality, AgreesWithGridSearch) {
  const VolumeConstraint c{Vector::Ones(3), 1.2};
  const Vector x = (Vector(3) << 0.9, 0.3, 0.0).finished();
  const Vector g = (Vector(3) << -0.5, 0.3, -0.2).finished();
  const double chi = criticality_chi(x, g, c).value;
  const int m = 200;
  double best = 0.0;
  for (int a = 0; a <= m; ++a) {
    for (int b = 0; b <= m; ++b) {
      for (int e = 0; e <= m; ++e) {
        const Vector y = (Vector(3) << double(a) / m, double(b) / m, double(e) / m).finished();
        if (y.sum() > 1.2 || (y - x).norm() > 1.0) continue;
        best = std::max(best, -g.dot(y - x));
      }
    }
  }
  EXPECT_GE(chi, best - 1e-8);
  EXPECT_LT(chi - best, 0.01);
}
