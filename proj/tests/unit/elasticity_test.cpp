#include "fixtures.hpp"
#include "romtopt/elasticity.hpp"

#include <gtest/gtest.h>

using namespace romtopt;

TEST(Material, InterpolationValues) {
  const MaterialModel m;
  EXPECT_DOUBLE_EQ(m.alpha(1.0), 1.0);
  EXPECT_DOUBLE_EQ(m.alpha(1e-3), 1e-3 + 0.999 * 1e-9);
  EXPECT_DOUBLE_EQ(m.dalpha(0.5), 0.999 * 3 * 0.25);
  for (double r = 0.0; r < 1.0; r += 0.05) EXPECT_LT(m.alpha(r), m.alpha(r + 0.05));
}

TEST(Stiffness, UnitDensityIsUnitAssembly) {
  const auto p = fixtures::toy(4, 3);
  const auto c = oracle::cantilever(4, 3, 1.0);
  const Matrix Ke = oracle::quadrature_stiffness(1.0, 0.3, 1.0);
  const Matrix K1 = fixtures::dense(p.model->assemble_stiffness(Vector::Ones(12)));
  EXPECT_LT(fixtures::rel(K1, oracle::dense_stiffness(c.grid, Ke, Vector::Ones(12), c.free)), 1e-13);
  const Matrix Kl = fixtures::dense(p.model->assemble_stiffness(Vector::Constant(12, 1e-3)));
  EXPECT_LT(fixtures::rel(Kl, (1e-3 + 0.999e-9) * K1), 1e-13);
}

TEST(Stiffness, TwoElementsMatchDenseOracle) {
  const auto p = fixtures::toy(2, 1);
  const auto c = oracle::cantilever(2, 1, 1.0);
  Vector rho(2);
  rho << 0.3, 0.9;
  const Vector a = (Vector(2) << oracle::alpha(0.3), oracle::alpha(0.9)).finished();
  const Matrix ref = oracle::dense_stiffness(c.grid, oracle::quadrature_stiffness(1.0, 0.3, 1.0), a, c.free);
  EXPECT_LT(fixtures::rel(fixtures::dense(p.model->assemble_stiffness(rho)), ref), 1e-13);
  EXPECT_LT((p.model->apply_stiffness(rho, Vector::Ones(ref.rows())) - ref * Vector::Ones(ref.rows())).norm(),
            1e-13 * ref.norm());
}

TEST(Stiffness, RejectsOutOfRangeDensity) {
  const auto p = fixtures::toy(2, 1);
  EXPECT_THROW(p.model->assemble_stiffness(Vector::Constant(2, 1e-4)), std::out_of_range);
  EXPECT_THROW(p.model->assemble_stiffness(Vector::Constant(2, 1.1)), std::out_of_range);
}

TEST(HdmSolve, ToyComplianceMatchesDenseOracle) {
  auto p = fixtures::toy(2, 1, 0.5);
  const auto c = oracle::cantilever(2, 1, 1.0);
  const Vector psi = (Vector(2) << 0.35, 0.8).finished();
  const HdmSolution s = p.model->solve(psi, *p.objective);
  const Vector rho = oracle::dense_filter(c.grid, p.filter->r()) * psi;
  Vector a(2);
  for (int e = 0; e < 2; ++e) a[e] = oracle::alpha(rho[e]);
  const Matrix K = oracle::dense_stiffness(c.grid, oracle::quadrature_stiffness(1.0, 0.3, 1.0), a, c.free);
  const Vector u = K.ldlt().solve(c.load);
  EXPECT_NEAR(s.J, c.load.dot(u), 1e-10 * c.load.dot(u));
  EXPECT_LT((s.u - u).norm(), 1e-10 * u.norm());
  EXPECT_GT(s.J, 0.0);
}

TEST(HdmSolve, ComplianceAdjointIsPrimal) {
  auto p = fixtures::toy(6, 2);
  const HdmSolution s = p.model->solve(Vector::Constant(12, 0.5), *p.objective);
  EXPECT_EQ(s.u, s.lambda);
  EXPECT_EQ(p.stats->hdm_adjoint_solves, 0);
}

TEST(HdmSolve, ComplianceIdentity) {
  auto p = fixtures::toy(8, 4);
  std::mt19937_64 rng(4);
  const Vector psi = oracle::uniform(rng, 32, 0.1, 1.0);
  const HdmSolution s = p.model->solve(psi, *p.objective);
  const double uKu = s.u.dot(p.model->apply_stiffness(s.density.rho, s.u));
  EXPECT_NEAR(s.J, uKu, 1e-9 * s.J);
}

TEST(HdmSolve, RepeatedSolveIsIdentical) {
  auto p = fixtures::toy(8, 4, 1.5, "quadratic-test");
  std::mt19937_64 rng(6);
  const Vector psi = oracle::uniform(rng, 32, 0.1, 1.0);
  const HdmSolution a = p.model->solve(psi, *p.objective);
  const HdmSolution b = p.model->solve(psi, *p.objective);
  EXPECT_EQ(a.J, b.J);
  EXPECT_EQ(p.model->gradient(psi, a, *p.objective), p.model->gradient(psi, b, *p.objective));
}

namespace {

void check_gradient(const std::string& objective, unsigned seed) {
  auto p = fixtures::toy(12, 4, 1.5, objective);
  std::mt19937_64 rng(seed);
  const Vector psi = oracle::uniform(rng, 48, 0.2, 0.9);
  const HdmSolution s = p.model->solve(psi, *p.objective);
  const Vector g = p.model->gradient(psi, s, *p.objective);
  // Richardson-extrapolated central differences.
  const auto J = [&](const Vector& x) { return p.model->solve(x, *p.objective).J; };
  const Vector fd = (4.0 * oracle::fd_gradient(J, psi, 5e-5) - oracle::fd_gradient(J, psi, 1e-4)) / 3.0;
  for (int e = 0; e < 48; ++e) EXPECT_NEAR(g[e], fd[e], 1e-5 * std::max(1.0, std::abs(g[e]))) << objective << " e=" << e;
}

}  // namespace

TEST(Gradient, ComplianceMatchesCentralDifferences) { check_gradient("compliance", 21); }
TEST(Gradient, NonlinearObjectiveMatchesCentralDifferences) { check_gradient("quadratic-test", 22); }

TEST(Gradient, ComplianceSensitivityIsNonPositive) {
  auto p = fixtures::toy(8, 4, 0.05);
  std::mt19937_64 rng(9);
  const Vector psi = oracle::uniform(rng, 32, 0.1, 1.0);
  const HdmSolution s = p.model->solve(psi, *p.objective);
  const Vector sens = p.model->density_sensitivity(s.density, s.u, s.lambda, *p.objective);
  EXPECT_LE(sens.maxCoeff(), 0.0);
  EXPECT_LE(p.model->gradient(psi, s, *p.objective).maxCoeff(), 0.0);
}

TEST(Gradient, RespectsMirrorSymmetry) {
  ProblemSpec spec;
  spec.name = "clamped-clamped";
  spec.nx = 8;
  spec.ny = 4;
  spec.filter_radius = 1.0;
  spec.filter_r_over_R = 0.5;
  spec.edge_supports = {{Boundary::Left, true, true}, {Boundary::Right, true, true}};
  spec.loads = {{Boundary::Top, 3.0, 5.0, 0.0, -1.0}};
  auto p = build_problem(spec);
  const Vector psi = Vector::Constant(32, 0.5);
  const Vector g = p.model->gradient(psi, p.model->solve(psi, *p.objective), *p.objective);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(g[j * 8 + i], g[j * 8 + 7 - i], 1e-10 * g.cwiseAbs().maxCoeff());
  }
}

TEST(Gradient, StaleSolutionRejected) {
  auto p = fixtures::toy(4, 2);
  const Vector psi = Vector::Constant(8, 0.5);
  const HdmSolution s = p.model->solve(psi, *p.objective);
  EXPECT_THROW(p.model->gradient(Vector::Constant(8, 0.4), s, *p.objective), StaleStateError);
}

TEST(Instrumentation, HdmCountEqualsFactorizations) {
  auto p = fixtures::toy(6, 3, 1.0, "quadratic-test");
  std::mt19937_64 rng(12);
  for (int t = 0; t < 7; ++t) {
    const Vector psi = oracle::uniform(rng, 18, 0.1, 1.0);
    const HdmSolution s = p.model->solve(psi, *p.objective);
    p.model->gradient(psi, s, *p.objective);
  }
  EXPECT_EQ(p.stats->hdm_solves, 7);
  EXPECT_EQ(p.stats->stiffness_factorizations, 7);
  EXPECT_EQ(p.stats->hdm_adjoint_solves, 7);
}

TEST(PhysicalDensity, ClampsAndMasksGradient) {
  auto p = fixtures::toy(4, 2, 0.0);
  Vector psi = Vector::Constant(8, 0.5);
  psi[0] = -0.5;
  const PhysicalDensity d = p.model->physical_density(psi);
  EXPECT_GE(d.rho.minCoeff(), p.model->material().rho_min);
  EXPECT_EQ(d.active[0], 0.0);
  EXPECT_GT(d.clamp_width, 0.0);
}
