#pragma once

#include "romtopt/types.hpp"

namespace romtopt {

enum class PlaneModel { Stress, Strain };

/// Unit-density Q1 stiffness of a square element in closed form.
///
/// Dof order is (u_x, u_y) per node, nodes counter-clockwise from the
/// lower-left corner. In 2D the square-element stiffness does not depend on
/// the edge length, so `h` is only validated.
Matrix8 elasticity_element_matrix(double E0, double nu, double h,
                                  PlaneModel model = PlaneModel::Stress);

struct HelmholtzElement {
  Matrix4 stiffness;  ///< r^2 * S_e + M_e
  Vector4 load;       ///< M_e * 1, the integral of each basis function
};

/// Element matrices of the Q1 discretization of -r^2 lap(phi) + phi = psi.
HelmholtzElement helmholtz_element_matrices(double r, double h);

/// Q1 Laplacian element matrix of a square (independent of h).
Matrix4 laplacian_element_matrix();
/// Consistent Q1 mass matrix of a square of side h.
Matrix4 mass_element_matrix(double h);

}  // namespace romtopt
