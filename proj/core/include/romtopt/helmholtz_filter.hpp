#pragma once

#include "romtopt/element.hpp"
#include "romtopt/mesh.hpp"
#include "romtopt/sparse.hpp"

namespace romtopt {

/// Nodal and element-averaged outputs of one filter application.
struct FilteredDensity {
  Vector phi;  ///< nodal Helmholtz solution
  Vector rho;  ///< element average of phi
};

/// PDE (Helmholtz) density filter with element averaging.
///
/// Solves H phi = b(psi) with H = sum Q_e (r^2 S_e + M_e) Q_e^T under natural
/// (Neumann) boundary conditions, then averages phi over the four nodes of
/// each element. The map psi -> rho is linear, preserves constants, and
/// preserves sum_e rho_e |Omega_e|. H is factorized once at construction;
/// the object is immutable afterwards and all applications are reentrant.
class HelmholtzFilter {
 public:
  /// `r` is the Helmholtz length parameter (not the characteristic radius).
  HelmholtzFilter(const StructuredMesh& mesh, double r);

  /// Helmholtz length parameter for filter radius R: r = R / (2 sqrt(3)).
  static double length_from_radius(double R);

  FilteredDensity filter(const Vector& psi) const;
  Vector apply(const Vector& psi) const { return filter(psi).rho; }

  /// Transpose of the linear map psi -> rho applied to an element vector.
  ///
  /// Returns w with w_e = b_e^T Q_e^T mu, where H mu = sum_e (v_e / 4) Q_e 1.
  Vector apply_adjoint(const Vector& v) const;

  double r() const { return r_; }
  const SparseMatrix& matrix() const { return H_; }
  const HelmholtzElement& element() const { return element_; }
  const StructuredMesh& mesh() const { return mesh_; }

 private:
  StructuredMesh mesh_;
  double r_;
  HelmholtzElement element_;
  SparseMatrix H_;
  SpdFactorization factor_;
};

}  // namespace romtopt
