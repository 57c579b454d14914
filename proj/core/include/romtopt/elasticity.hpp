#pragma once

#include "romtopt/helmholtz_filter.hpp"
#include "romtopt/material.hpp"
#include "romtopt/mesh.hpp"
#include "romtopt/objective.hpp"
#include "romtopt/sparse.hpp"

#include <atomic>
#include <cstdint>
#include <memory>

namespace romtopt {

/// Solve counters shared by everything that evaluates one problem.
struct SolveStats {
  std::atomic<long> hdm_solves{0};
  std::atomic<long> hdm_adjoint_solves{0};
  std::atomic<long> rom_solves{0};
  std::atomic<long> stiffness_factorizations{0};

  void reset() {
    hdm_solves = 0;
    hdm_adjoint_solves = 0;
    rom_solves = 0;
    stiffness_factorizations = 0;
  }
};

/// Filtered density as seen by the stiffness: rho clamped to [rho_min, 1].
struct PhysicalDensity {
  Vector phi;
  Vector rho;
  Vector active;  ///< 1 where the clamp is inactive (derivative of the clamp)
  double clamp_width = 0.0;
};

/// Full-order state at one design.
struct HdmSolution {
  std::uint64_t psi_hash = 0;
  PhysicalDensity density;
  Vector u;
  Vector lambda;
  double J = 0.0;
};

/// High-dimensional (full finite element) model of the design-to-objective map.
///
/// Holds the mesh, eliminated-dof numbering, unit element stiffness, load and
/// filter; all evaluation methods are const and safe to call concurrently.
class ElasticityModel {
 public:
  ElasticityModel(const StructuredMesh& mesh, DofMap dofs, Matrix8 Ke, Vector load,
                  MaterialModel material, std::shared_ptr<const HelmholtzFilter> filter,
                  std::shared_ptr<SolveStats> stats = nullptr);

  const StructuredMesh& mesh() const { return mesh_; }
  const DofMap& dofs() const { return dofs_; }
  const Matrix8& element_stiffness() const { return Ke_; }
  const Vector& load() const { return f_; }
  const MaterialModel& material() const { return material_; }
  const HelmholtzFilter& filter() const { return *filter_; }
  SolveStats& stats() const { return *stats_; }
  int elem_count() const { return mesh_.elem_count(); }
  int dof_count() const { return dofs_.free_dofs(); }

  PhysicalDensity physical_density(const Vector& psi) const;
  Vector alpha(const Vector& rho) const;

  /// K(rho) = sum_e alpha(rho_e) P_e K_e P_e^T on the free dofs.
  SparseMatrix assemble_stiffness(const Vector& rho) const;
  SpdFactorization factorize_stiffness(const Vector& rho) const;
  /// K(rho) v by element loop, without assembling.
  Vector apply_stiffness(const Vector& rho, const Vector& v) const;

  /// Primal solve, objective value and (unless compliance) the adjoint solve.
  HdmSolution solve(const Vector& psi, const Objective& objective) const;

  /// dJ/dpsi by the adjoint method; throws StaleStateError if `solution`
  /// was computed for a different design.
  Vector gradient(const Vector& psi, const HdmSolution& solution, const Objective& objective) const;

  /// Element sensitivity s_e = dj/drho_e - alpha'(rho_e) u_e^T K_e lambda_e, times
  /// the clamp derivative. The design gradient is filter().apply_adjoint(s).
  Vector density_sensitivity(const PhysicalDensity& density, const Vector& u, const Vector& lambda,
                             const Objective& objective) const;

  Eigen::Matrix<double, 8, 1> gather(const Vector& v, int e) const;

 private:
  StructuredMesh mesh_;
  DofMap dofs_;
  Matrix8 Ke_;
  Vector f_;
  MaterialModel material_;
  std::shared_ptr<const HelmholtzFilter> filter_;
  std::shared_ptr<SolveStats> stats_;
  std::shared_ptr<const AssemblyPattern> pattern_;
  std::shared_ptr<const SymbolicFactorization> symbolic_;
};

}  // namespace romtopt
