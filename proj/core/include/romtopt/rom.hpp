#pragma once

#include "romtopt/elasticity.hpp"

#include <cstdint>
#include <deque>
#include <optional>

namespace romtopt {

/// Raised when the reduced stiffness is numerically singular.
class BasisDegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bounded history of HDM primal and adjoint states, oldest first.
class SnapshotWindow {
 public:
  explicit SnapshotWindow(int capacity);

  void push(const Vector& u, const Vector& lambda);
  void clear();

  int capacity() const { return capacity_; }
  int size() const { return static_cast<int>(primal_.size()); }
  bool empty() const { return primal_.empty(); }
  Matrix primal_matrix() const;
  Matrix adjoint_matrix() const;

 private:
  int capacity_;
  std::deque<Vector> primal_;
  std::deque<Vector> adjoint_;
};

/// First n left singular vectors of `snapshots` (thin SVD). Each column is
/// signed so that its largest-magnitude component is positive.
Matrix pod(const Matrix& snapshots, int n);

/// Modified Gram-Schmidt with one reorthogonalization pass. A column whose
/// norm after projection is below `drop_tol` times its original norm is
/// discarded; `dropped` receives the number of discarded columns.
Matrix gram_schmidt(const Matrix& columns, double drop_tol = 1e-10, int* dropped = nullptr);

/// Orthonormal reduced basis with the element-local data used by the ROM.
///
/// Stores B (8 N_e x j, rows 8e..8e+7 = P_e^T Phi), A = blockdiag(K_e) B and
/// f_hat = Phi^T f. Each basis gets a process-unique generation id.
class ReducedBasis {
 public:
  ReducedBasis(const ElasticityModel& model, Matrix phi);

  const ElasticityModel& model() const { return *model_; }
  const Matrix& phi() const { return phi_; }
  int size() const { return static_cast<int>(phi_.cols()); }
  const Matrix& element_basis() const { return B_; }
  const Matrix& element_action() const { return A_; }
  const Vector& reduced_load() const { return f_hat_; }
  std::uint64_t generation() const { return generation_; }

  /// Phi^T K(rho) Phi = sum_e alpha(rho_e) (P_e^T Phi)^T K_e (P_e^T Phi).
  Matrix reduced_stiffness(const Vector& rho) const;
  /// Sum_e P_e alpha(rho_e) A_e c - f, in the full free-dof space.
  Vector residual(const Vector& rho, const Vector& coeffs) const;
  /// Per-element values of (B a)_e^T (A c)_e.
  Vector element_contraction(const Vector& a, const Vector& c) const;

 private:
  const ElasticityModel* model_;
  Matrix phi_;
  Matrix B_;
  Matrix A_;
  Vector f_hat_;
  std::uint64_t generation_;
};

struct BasisBuildInfo {
  int n_k = 0;
  int candidates = 0;
  int dropped = 0;
};

/// Phi = GramSchmidt([u_c, lambda_c, POD_n(U), POD_n(Lambda)]) with
/// n = min(window.size() - 1, n_max); for compliance only [u_c, POD_n(U)].
/// The center states are orthonormalized first and are never dropped.
/// The window is expected to already contain the center snapshot.
ReducedBasis build_basis(const ElasticityModel& model, const SnapshotWindow& window,
                         const Vector& center_u, const Vector& center_lambda, bool is_compliance,
                         int n_max, BasisBuildInfo* info = nullptr);

/// Reduced state at one design.
struct RomSolution {
  std::uint64_t basis_generation = 0;
  std::uint64_t psi_hash = 0;
  PhysicalDensity density;
  Vector u_hat;
  Vector lambda_hat;
  Vector u;       ///< Phi u_hat
  Vector lambda;  ///< Phi lambda_hat
  double J = 0.0;
};

/// Galerkin solve K_hat u_hat = f_hat (plus the reduced adjoint unless the
/// objective is compliance). Counts one ROM solve.
RomSolution rom_solve(const ReducedBasis& basis, const Vector& psi, const Objective& objective);

/// Full-space 2-norm of the residual at the reduced state.
double residual_norm(const ReducedBasis& basis, const RomSolution& solution);
double residual_norm(const ReducedBasis& basis, const Vector& rho, const Vector& u_hat);

/// Gradient of the reduced objective J_k at `psi`.
Vector rom_gradient(const ReducedBasis& basis, const Vector& psi, const RomSolution& solution,
                    const Objective& objective);

enum class ErrorMode { Cheap, Certified };

struct ErrorReport {
  double primal_residual = 0.0;
  double adjoint_residual = 0.0;
  bool sigma_available = false;
  double sigma_min = 0.0;
  /// ||u - u_k||_K <= sigma_min^{-1/2} ||r||
  double state_energy_bound = 0.0;
  /// |J - J_k| <= ||r||^2 / sigma_min (compliance only)
  double compliance_bound = 0.0;
};

struct SigmaEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Smallest eigenvalue of K(rho) by inverse power iteration on its factorization.
SigmaEstimate estimate_sigma_min(const ElasticityModel& model, const Vector& rho,
                                 int max_iters = 200, double tol = 1e-10);

ErrorReport error_bounds(const ReducedBasis& basis, const RomSolution& solution,
                         const Objective& objective, ErrorMode mode);

}  // namespace romtopt
