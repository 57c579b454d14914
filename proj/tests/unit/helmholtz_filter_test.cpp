#include "fixtures.hpp"
#include "romtopt/helmholtz_filter.hpp"

#include <gtest/gtest.h>

using namespace romtopt;

namespace {

Matrix filter_matrix(const HelmholtzFilter& f, int n) {
  Matrix F(n, n);
  for (int e = 0; e < n; ++e) F.col(e) = f.apply(Vector::Unit(n, e));
  return F;
}

}  // namespace

TEST(HelmholtzFilter, PreservesConstants) {
  const HelmholtzFilter f(build_mesh(7, 4, 0.3), 0.5);
  const Vector rho = f.apply(Vector::Constant(28, 0.5));
  EXPECT_LT((rho.array() - 0.5).abs().maxCoeff(), 1e-14);
}

TEST(HelmholtzFilter, PreservesVolume) {
  const StructuredMesh m = build_mesh(9, 5, 0.4);
  const HelmholtzFilter f(m, HelmholtzFilter::length_from_radius(1.2));
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const Vector psi = oracle::uniform(rng, m.elem_count(), 0.0, 1.0);
    const Vector rho = f.apply(psi);
    const double vpsi = psi.sum() * m.element_area();
    EXPECT_LE(std::abs(rho.sum() * m.element_area() - vpsi), 1e-10 * vpsi);
    EXPECT_GE(rho.minCoeff(), psi.minCoeff() - 1e-12);
    EXPECT_LE(rho.maxCoeff(), psi.maxCoeff() + 1e-12);
  }
}

TEST(HelmholtzFilter, MatchesDenseSolve) {
  for (auto [nx, ny] : {std::pair{1, 1}, {3, 2}, {4, 3}}) {
    const oracle::Grid g{nx, ny, 0.5};
    const HelmholtzFilter f(build_mesh(nx, ny, 0.5), 0.35);
    EXPECT_LT(fixtures::rel(fixtures::dense(f.matrix()), oracle::dense_helmholtz(g, 0.35)), 1e-13);
    EXPECT_LT(fixtures::rel(filter_matrix(f, g.elems()), oracle::dense_filter(g, 0.35)), 1e-12);
  }
}

TEST(HelmholtzFilter, IndicatorSpreadsWithRadialDecay) {
  const int n = 8;
  const double h = 1.0;
  const HelmholtzFilter f(build_mesh(n, n, h), HelmholtzFilter::length_from_radius(2.0 * h));
  const int center = 3 * n + 3;
  const Vector rho = f.apply(Vector::Unit(n * n, center));
  EXPECT_LT((rho - oracle::dense_filter({n, n, h}, f.r()).col(center)).norm(), 1e-12);
  EXPECT_EQ(rho.maxCoeff(), rho[center]);
  EXPECT_LT(rho[center], 1.0);
  // Along the row through the indicator the response decays away from it.
  for (int i = 4; i + 1 < n; ++i) EXPECT_GT(rho[3 * n + i], rho[3 * n + i + 1]);
  for (int i = 3; i > 0; --i) EXPECT_GT(rho[3 * n + i], rho[3 * n + i - 1]);
}

TEST(HelmholtzFilter, Linear) {
  const HelmholtzFilter f(build_mesh(6, 6, 1.0), 1.1);
  std::mt19937_64 rng(2);
  const Vector a = oracle::uniform(rng, 36, 0, 1), b = oracle::uniform(rng, 36, 0, 1);
  const Vector lhs = f.apply(0.3 * a - 1.7 * b);
  EXPECT_LT((lhs - (0.3 * f.apply(a) - 1.7 * f.apply(b))).norm(), 1e-12 * lhs.norm());
}

TEST(HelmholtzFilter, AdjointIsExactTranspose) {
  const int n = 12;
  const HelmholtzFilter f(build_mesh(n, n, 1.0), HelmholtzFilter::length_from_radius(3.0));
  const Matrix F = oracle::dense_filter({n, n, 1.0}, f.r());
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const Vector u = oracle::uniform(rng, n * n, -1, 1), v = oracle::uniform(rng, n * n, -1, 1);
    EXPECT_NEAR(f.apply(u).dot(v), u.dot(f.apply_adjoint(v)), 1e-12 * u.norm() * v.norm());
    EXPECT_LT((f.apply_adjoint(v) - F.transpose() * v).norm(), 1e-11 * v.norm());
  }
}

TEST(HelmholtzFilter, AdjointMatchesFiniteDifferenceJacobian) {
  const HelmholtzFilter f(build_mesh(5, 4, 1.0), 0.8);
  std::mt19937_64 rng(8);
  const Vector psi = oracle::uniform(rng, 20, 0, 1);
  const Vector v = oracle::uniform(rng, 20, -1, 1);
  const Vector w = f.apply_adjoint(v);
  const double d = 1e-6;
  for (int e = 0; e < 20; ++e) {
    const Vector col = (f.apply(psi + d * Vector::Unit(20, e)) - f.apply(psi - d * Vector::Unit(20, e))) / (2 * d);
    EXPECT_NEAR(col.dot(v), w[e], 1e-6 * std::max(1.0, std::abs(w[e])));
  }
}

TEST(HelmholtzFilter, AdjointOfOnesIsVolumeWeight) {
  for (double r : {0.0, 0.6}) {
    const HelmholtzFilter f(build_mesh(4, 3, 0.5), r);
    EXPECT_LT((f.apply_adjoint(Vector::Ones(12)).array() - 1.0).abs().maxCoeff(), 1e-13);
  }
}

TEST(HelmholtzFilter, RadiusConvention) {
  EXPECT_DOUBLE_EQ(HelmholtzFilter::length_from_radius(2.0 * std::sqrt(3.0)), 1.0);
}

TEST(HelmholtzFilter, RejectsSizeMismatch) {
  const HelmholtzFilter f(build_mesh(3, 3, 1.0), 0.5);
  EXPECT_THROW(f.filter(Vector::Ones(8)), std::invalid_argument);
  EXPECT_THROW(f.apply_adjoint(Vector::Ones(10)), std::invalid_argument);
}
