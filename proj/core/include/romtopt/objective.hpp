#pragma once

#include "romtopt/types.hpp"

#include <memory>
#include <string>

namespace romtopt {

/// Output functional j(u, rho) of the displacement and filtered density.
///
/// Implementations provide analytic partial derivatives. Vectors u are in the
/// free-dof numbering.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual double value(const Vector& u, const Vector& rho) const = 0;
  /// (dj/du)^T
  virtual Vector du(const Vector& u, const Vector& rho) const = 0;
  /// (dj/drho)^T
  virtual Vector drho(const Vector& u, const Vector& rho) const = 0;

  /// j = f^T u: the adjoint equals the primal state and dj/drho = 0.
  virtual bool is_compliance() const { return false; }
  virtual bool is_linear_in_u() const { return false; }
  virtual std::string name() const = 0;
};

/// j_c(u) = f^T u.
class ComplianceObjective final : public Objective {
 public:
  explicit ComplianceObjective(Vector load) : f_(std::move(load)) {}

  double value(const Vector& u, const Vector&) const override { return f_.dot(u); }
  Vector du(const Vector&, const Vector&) const override { return f_; }
  Vector drho(const Vector&, const Vector& rho) const override { return Vector::Zero(rho.size()); }
  bool is_compliance() const override { return true; }
  bool is_linear_in_u() const override { return true; }
  std::string name() const override { return "compliance"; }

 private:
  Vector f_;
};

/// j(u, rho) = f^T u + 1/2 |u|^2 + sum_e rho_e^2.
///
/// Nonlinear in both arguments with constant Hessian blocks; exercises the
/// full adjoint path that compliance short-circuits.
class QuadraticTestObjective final : public Objective {
 public:
  explicit QuadraticTestObjective(Vector load) : f_(std::move(load)) {}

  double value(const Vector& u, const Vector& rho) const override {
    return f_.dot(u) + 0.5 * u.squaredNorm() + rho.squaredNorm();
  }
  Vector du(const Vector& u, const Vector&) const override { return f_ + u; }
  Vector drho(const Vector&, const Vector& rho) const override { return 2.0 * rho; }
  std::string name() const override { return "quadratic-test"; }

 private:
  Vector f_;
};

std::unique_ptr<Objective> make_objective(const std::string& name, const Vector& load);

}  // namespace romtopt
