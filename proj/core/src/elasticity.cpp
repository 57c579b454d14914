#include "romtopt/elasticity.hpp"

#include <algorithm>
#include <string>

namespace romtopt {

namespace {

constexpr double kBoundsTolerance = 1e-12;

std::shared_ptr<const AssemblyPattern> make_pattern(const StructuredMesh& mesh, const DofMap& dofs) {
  std::vector<int> scatter;
  scatter.reserve(static_cast<std::size_t>(mesh.elem_count()) * 8);
  for (int e = 0; e < mesh.elem_count(); ++e) {
    for (int d : dofs.element_free_dofs(e)) scatter.push_back(d);
  }
  return std::make_shared<const AssemblyPattern>(dofs.free_dofs(), 8, scatter);
}

}  // namespace

ElasticityModel::ElasticityModel(const StructuredMesh& mesh, DofMap dofs, Matrix8 Ke, Vector load,
                                 MaterialModel material,
                                 std::shared_ptr<const HelmholtzFilter> filter,
                                 std::shared_ptr<SolveStats> stats)
    : mesh_(mesh),
      dofs_(std::move(dofs)),
      Ke_(Ke),
      f_(std::move(load)),
      material_(material),
      filter_(std::move(filter)),
      stats_(stats ? std::move(stats) : std::make_shared<SolveStats>()) {
  material_.validate();
  if (f_.size() != dofs_.free_dofs()) throw std::invalid_argument("load vector size mismatch");
  if (!filter_ || filter_->mesh().elem_count() != mesh_.elem_count()) {
    throw std::invalid_argument("filter does not match the mesh");
  }
  pattern_ = make_pattern(mesh_, dofs_);
  const std::vector<double> ones(mesh_.elem_count(), 1.0);
  symbolic_ = std::make_shared<const SymbolicFactorization>(pattern_->assemble(Ke_, ones));
}

PhysicalDensity ElasticityModel::physical_density(const Vector& psi) const {
  FilteredDensity filtered = filter_->filter(psi);
  PhysicalDensity out;
  out.phi = std::move(filtered.phi);
  out.rho = std::move(filtered.rho);
  out.active = Vector::Ones(out.rho.size());
  for (Eigen::Index e = 0; e < out.rho.size(); ++e) {
    double& r = out.rho[e];
    const double clamped = std::clamp(r, material_.rho_min, 1.0);
    if (clamped != r) {
      out.clamp_width = std::max(out.clamp_width, std::abs(clamped - r));
      out.active[e] = 0.0;
      r = clamped;
    }
  }
  return out;
}

Vector ElasticityModel::alpha(const Vector& rho) const {
  Vector a(rho.size());
  for (Eigen::Index e = 0; e < rho.size(); ++e) a[e] = material_.alpha(rho[e]);
  return a;
}

SparseMatrix ElasticityModel::assemble_stiffness(const Vector& rho) const {
  if (rho.size() != elem_count()) throw std::invalid_argument("density vector size mismatch");
  for (Eigen::Index e = 0; e < rho.size(); ++e) {
    if (!(rho[e] >= material_.rho_min - kBoundsTolerance && rho[e] <= 1.0 + kBoundsTolerance)) {
      throw std::out_of_range("density " + std::to_string(rho[e]) + " of element " +
                              std::to_string(e) + " outside [rho_min, 1]");
    }
  }
  const Vector a = alpha(rho);
  return pattern_->assemble(Ke_, {a.data(), static_cast<std::size_t>(a.size())});
}

SpdFactorization ElasticityModel::factorize_stiffness(const Vector& rho) const {
  SpdFactorization F(assemble_stiffness(rho), symbolic_);
  ++stats_->stiffness_factorizations;
  return F;
}

Eigen::Matrix<double, 8, 1> ElasticityModel::gather(const Vector& v, int e) const {
  Eigen::Matrix<double, 8, 1> ve;
  const auto& map = dofs_.element_free_dofs(e);
  for (int a = 0; a < 8; ++a) ve[a] = map[a] >= 0 ? v[map[a]] : 0.0;
  return ve;
}

Vector ElasticityModel::apply_stiffness(const Vector& rho, const Vector& v) const {
  Vector out = Vector::Zero(dof_count());
  for (int e = 0; e < elem_count(); ++e) {
    const Eigen::Matrix<double, 8, 1> ke = material_.alpha(rho[e]) * (Ke_ * gather(v, e));
    const auto& map = dofs_.element_free_dofs(e);
    for (int a = 0; a < 8; ++a)
      if (map[a] >= 0) out[map[a]] += ke[a];
  }
  return out;
}

HdmSolution ElasticityModel::solve(const Vector& psi, const Objective& objective) const {
  HdmSolution sol;
  sol.psi_hash = hash_vector(psi);
  sol.density = physical_density(psi);
  const SpdFactorization F = factorize_stiffness(sol.density.rho);
  sol.u = F.solve(f_);
  ++stats_->hdm_solves;
  if (objective.is_compliance()) {
    sol.lambda = sol.u;
  } else {
    sol.lambda = F.solve(objective.du(sol.u, sol.density.rho));
    ++stats_->hdm_adjoint_solves;
  }
  sol.J = objective.value(sol.u, sol.density.rho);
  return sol;
}

Vector ElasticityModel::density_sensitivity(const PhysicalDensity& density, const Vector& u,
                                            const Vector& lambda, const Objective& objective) const {
  Vector s = objective.drho(u, density.rho);
  for (int e = 0; e < elem_count(); ++e) {
    const auto ue = gather(u, e);
    const auto le = gather(lambda, e);
    s[e] -= material_.dalpha(density.rho[e]) * ue.dot(Ke_ * le);
    s[e] *= density.active[e];
  }
  return s;
}

Vector ElasticityModel::gradient(const Vector& psi, const HdmSolution& solution,
                                 const Objective& objective) const {
  if (hash_vector(psi) != solution.psi_hash) {
    throw StaleStateError("HDM solution was computed for a different design");
  }
  return filter_->apply_adjoint(density_sensitivity(solution.density, solution.u, solution.lambda, objective));
}

}  // namespace romtopt
