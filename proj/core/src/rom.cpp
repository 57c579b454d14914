#include "romtopt/rom.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <atomic>
#include <cmath>

namespace romtopt {

namespace {

std::atomic<std::uint64_t> next_generation{1};

constexpr double kReducedPivotRatio = 1e-14;

Matrix stack_columns(const std::deque<Vector>& cols) {
  if (cols.empty()) return {};
  Matrix M(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) M.col(static_cast<Eigen::Index>(c)) = cols[c];
  return M;
}

Eigen::LLT<Matrix> factor_reduced(const Matrix& K) {
  Eigen::LLT<Matrix> llt(K);
  if (llt.info() != Eigen::Success) throw BasisDegeneracyError("reduced stiffness is not positive definite");
  const auto L = llt.matrixLLT().diagonal();
  const auto d = K.diagonal();
  for (Eigen::Index i = 0; i < L.size(); ++i) {
    if (L[i] * L[i] < kReducedPivotRatio * d[i]) {
      throw BasisDegeneracyError("reduced stiffness is numerically singular");
    }
  }
  return llt;
}

}  // namespace

SnapshotWindow::SnapshotWindow(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw std::invalid_argument("snapshot window capacity must be >= 1");
}

void SnapshotWindow::push(const Vector& u, const Vector& lambda) {
  primal_.push_back(u);
  adjoint_.push_back(lambda);
  while (static_cast<int>(primal_.size()) > capacity_) {
    primal_.pop_front();
    adjoint_.pop_front();
  }
}

void SnapshotWindow::clear() {
  primal_.clear();
  adjoint_.clear();
}

Matrix SnapshotWindow::primal_matrix() const { return stack_columns(primal_); }
Matrix SnapshotWindow::adjoint_matrix() const { return stack_columns(adjoint_); }

Matrix pod(const Matrix& snapshots, int n) {
  if (n < 0 || n > snapshots.cols()) {
    throw std::invalid_argument("POD size " + std::to_string(n) + " exceeds snapshot count " +
                                std::to_string(snapshots.cols()));
  }
  if (n == 0) return Matrix(snapshots.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(snapshots, Eigen::ComputeThinU);
  Matrix U = svd.matrixU().leftCols(n);
  for (Eigen::Index c = 0; c < U.cols(); ++c) {
    Eigen::Index imax = 0;
    U.col(c).cwiseAbs().maxCoeff(&imax);
    if (U(imax, c) < 0.0) U.col(c) = -U.col(c);
  }
  return U;
}

Matrix gram_schmidt(const Matrix& columns, double drop_tol, int* dropped) {
  Matrix Q(columns.rows(), columns.cols());
  int kept = 0;
  int drops = 0;
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    Vector v = columns.col(c);
    const double norm0 = v.norm();
    if (norm0 == 0.0 || !std::isfinite(norm0)) {
      ++drops;
      continue;
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (int q = 0; q < kept; ++q) v -= Q.col(q).dot(v) * Q.col(q);
    }
    const double norm = v.norm();
    if (norm < drop_tol * norm0) {
      ++drops;
      continue;
    }
    Q.col(kept++) = v / norm;
  }
  if (dropped) *dropped = drops;
  return Q.leftCols(kept);
}

ReducedBasis::ReducedBasis(const ElasticityModel& model, Matrix phi)
    : model_(&model), phi_(std::move(phi)), generation_(next_generation++) {
  if (phi_.rows() != model.dof_count()) throw std::invalid_argument("basis row count mismatch");
  if (phi_.cols() == 0) throw std::invalid_argument("empty reduced basis");
  const int ne = model.elem_count();
  const Eigen::Index j = phi_.cols();
  B_.resize(8 * static_cast<Eigen::Index>(ne), j);
  A_.resize(B_.rows(), j);
  const Matrix8& Ke = model.element_stiffness();
  for (int e = 0; e < ne; ++e) {
    const auto& map = model.dofs().element_free_dofs(e);
    auto Be = B_.middleRows(8 * static_cast<Eigen::Index>(e), 8);
    for (int a = 0; a < 8; ++a) {
      if (map[a] >= 0) {
        Be.row(a) = phi_.row(map[a]);
      } else {
        Be.row(a).setZero();
      }
    }
    A_.middleRows(8 * static_cast<Eigen::Index>(e), 8).noalias() = Ke * Be;
  }
  f_hat_ = phi_.transpose() * model.load();
}

Matrix ReducedBasis::reduced_stiffness(const Vector& rho) const {
  const int ne = model_->elem_count();
  if (rho.size() != ne) throw std::invalid_argument("density vector size mismatch");
  Vector a8(8 * static_cast<Eigen::Index>(ne));
  for (int e = 0; e < ne; ++e) a8.segment<8>(8 * static_cast<Eigen::Index>(e)).setConstant(model_->material().alpha(rho[e]));
  Matrix K = B_.transpose() * (a8.asDiagonal() * A_);
  return 0.5 * (K + K.transpose());
}

Vector ReducedBasis::residual(const Vector& rho, const Vector& coeffs) const {
  if (coeffs.size() != size()) throw std::invalid_argument("reduced coefficient size mismatch");
  const Vector v = A_ * coeffs;
  Vector r = -model_->load();
  for (int e = 0; e < model_->elem_count(); ++e) {
    const double a = model_->material().alpha(rho[e]);
    const auto& map = model_->dofs().element_free_dofs(e);
    for (int k = 0; k < 8; ++k)
      if (map[k] >= 0) r[map[k]] += a * v[8 * e + k];
  }
  return r;
}

Vector ReducedBasis::element_contraction(const Vector& a, const Vector& c) const {
  const Vector Ba = B_ * a;
  const Vector Ac = A_ * c;
  const int ne = model_->elem_count();
  Vector out(ne);
  for (int e = 0; e < ne; ++e) {
    out[e] = Ba.segment<8>(8 * static_cast<Eigen::Index>(e)).dot(Ac.segment<8>(8 * static_cast<Eigen::Index>(e)));
  }
  return out;
}

ReducedBasis build_basis(const ElasticityModel& model, const SnapshotWindow& window,
                         const Vector& center_u, const Vector& center_lambda, bool is_compliance,
                         int n_max, BasisBuildInfo* info) {
  if (center_u.size() == 0 || center_u.norm() == 0.0) throw std::invalid_argument("empty center state");
  if (!is_compliance && center_lambda.size() != center_u.size()) {
    throw std::invalid_argument("empty center adjoint state");
  }
  const int n_k = std::max(0, std::min(window.size() - 1, n_max));
  std::vector<Matrix> blocks;
  blocks.push_back(pod(window.primal_matrix(), n_k));
  if (!is_compliance) blocks.push_back(pod(window.adjoint_matrix(), n_k));
  Eigen::Index cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  const int centers = is_compliance ? 1 : 2;
  // Center states first, so that only POD columns can be dropped as dependent.
  Matrix candidates(center_u.size(), cols + centers);
  Eigen::Index c = 0;
  candidates.col(c++) = center_u;
  if (!is_compliance) candidates.col(c++) = center_lambda;
  for (const auto& b : blocks) {
    if (b.cols() > 0) candidates.middleCols(c, b.cols()) = b;
    c += b.cols();
  }
  int dropped = 0;
  Matrix phi = gram_schmidt(candidates, 1e-10, &dropped);
  if (info) {
    info->n_k = n_k;
    info->candidates = static_cast<int>(candidates.cols());
    info->dropped = dropped;
  }
  return ReducedBasis(model, std::move(phi));
}

RomSolution rom_solve(const ReducedBasis& basis, const Vector& psi, const Objective& objective) {
  const ElasticityModel& model = basis.model();
  RomSolution sol;
  sol.basis_generation = basis.generation();
  sol.psi_hash = hash_vector(psi);
  sol.density = model.physical_density(psi);
  const auto llt = factor_reduced(basis.reduced_stiffness(sol.density.rho));
  sol.u_hat = llt.solve(basis.reduced_load());
  sol.u = basis.phi() * sol.u_hat;
  if (objective.is_compliance()) {
    sol.lambda_hat = sol.u_hat;
    sol.lambda = sol.u;
  } else {
    sol.lambda_hat = llt.solve(basis.phi().transpose() * objective.du(sol.u, sol.density.rho));
    sol.lambda = basis.phi() * sol.lambda_hat;
  }
  sol.J = objective.value(sol.u, sol.density.rho);
  ++model.stats().rom_solves;
  return sol;
}

double residual_norm(const ReducedBasis& basis, const Vector& rho, const Vector& u_hat) {
  return basis.residual(rho, u_hat).norm();
}

double residual_norm(const ReducedBasis& basis, const RomSolution& solution) {
  if (solution.basis_generation != basis.generation()) {
    throw StaleStateError("reduced solution belongs to a different basis");
  }
  return residual_norm(basis, solution.density.rho, solution.u_hat);
}

Vector rom_gradient(const ReducedBasis& basis, const Vector& psi, const RomSolution& solution,
                    const Objective& objective) {
  if (solution.basis_generation != basis.generation()) {
    throw StaleStateError("reduced solution belongs to a different basis");
  }
  if (hash_vector(psi) != solution.psi_hash) {
    throw StaleStateError("reduced solution was computed for a different design");
  }
  const ElasticityModel& model = basis.model();
  const Vector& rho = solution.density.rho;
  Vector s = objective.drho(solution.u, rho);
  const Vector c = basis.element_contraction(solution.lambda_hat, solution.u_hat);
  for (Eigen::Index e = 0; e < s.size(); ++e) {
    s[e] = (s[e] - model.material().dalpha(rho[e]) * c[e]) * solution.density.active[e];
  }
  return model.filter().apply_adjoint(s);
}

SigmaEstimate estimate_sigma_min(const ElasticityModel& model, const Vector& rho, int max_iters,
                                 double tol) {
  const SpdFactorization F(model.assemble_stiffness(rho));
  const Eigen::Index n = model.dof_count();
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(i));
  x.normalize();
  SigmaEstimate est;
  double theta_prev = 0.0;
  for (int it = 1; it <= max_iters; ++it) {
    const Vector y = F.solve(x);
    const double theta = x.dot(y);
    est.iterations = it;
    est.value = 1.0 / theta;
    if (it > 1 && std::abs(theta - theta_prev) <= tol * std::abs(theta)) {
      est.converged = true;
      break;
    }
    theta_prev = theta;
    x = y / y.norm();
  }
  return est;
}

ErrorReport error_bounds(const ReducedBasis& basis, const RomSolution& solution,
                         const Objective& objective, ErrorMode mode) {
  if (solution.basis_generation != basis.generation()) {
    throw StaleStateError("reduced solution belongs to a different basis");
  }
  const ElasticityModel& model = basis.model();
  const Vector& rho = solution.density.rho;
  ErrorReport report;
  report.primal_residual = residual_norm(basis, solution);
  if (objective.is_compliance()) {
    report.adjoint_residual = report.primal_residual;
  } else {
    const Vector Klam = basis.residual(rho, solution.lambda_hat) + model.load();
    report.adjoint_residual = (Klam - objective.du(solution.u, rho)).norm();
  }
  if (mode == ErrorMode::Certified) {
    const SigmaEstimate sigma = estimate_sigma_min(model, rho);
    report.sigma_available = sigma.converged;
    if (sigma.converged) {
      report.sigma_min = sigma.value;
      report.state_energy_bound = report.primal_residual / std::sqrt(sigma.value);
      if (objective.is_compliance()) {
        report.compliance_bound = report.primal_residual * report.primal_residual / sigma.value;
      }
    }
  }
  return report;
}

}  // namespace romtopt
