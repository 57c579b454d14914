#include "romtopt/element.hpp"

namespace romtopt {

Matrix8 elasticity_element_matrix(double E0, double nu, double h, PlaneModel model) {
  if (!(E0 > 0.0)) throw std::invalid_argument("Young's modulus must be positive");
  if (!(nu >= 0.0 && nu < 0.5)) throw std::invalid_argument("Poisson ratio must lie in [0, 0.5)");
  if (!(h > 0.0)) throw std::invalid_argument("element size must be positive");

  double E = E0;
  double v = nu;
  if (model == PlaneModel::Strain) {
    E = E0 / (1.0 - nu * nu);
    v = nu / (1.0 - nu);
  }

  const double k[8] = {0.5 - v / 6.0,          0.125 + v / 8.0,  -0.25 - v / 12.0,
                       -0.125 + 3.0 * v / 8.0, -0.25 + v / 12.0, -0.125 - v / 8.0,
                       v / 6.0,                0.125 - 3.0 * v / 8.0};
  // Index pattern of the symmetric square-element stiffness.
  static constexpr int pattern[8][8] = {
      {0, 1, 2, 3, 4, 5, 6, 7}, {1, 0, 7, 6, 5, 4, 3, 2}, {2, 7, 0, 5, 6, 3, 4, 1},
      {3, 6, 5, 0, 7, 2, 1, 4}, {4, 5, 6, 7, 0, 1, 2, 3}, {5, 4, 3, 2, 1, 0, 7, 6},
      {6, 3, 4, 1, 2, 7, 0, 5}, {7, 2, 1, 4, 3, 6, 5, 0}};

  const double scale = E / (1.0 - v * v);
  Matrix8 Ke;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) Ke(i, j) = scale * k[pattern[i][j]];
  return Ke;
}

Matrix4 laplacian_element_matrix() {
  Matrix4 S;
  S << 4, -1, -2, -1,
      -1, 4, -1, -2,
      -2, -1, 4, -1,
      -1, -2, -1, 4;
  return S / 6.0;
}

Matrix4 mass_element_matrix(double h) {
  Matrix4 M;
  M << 4, 2, 1, 2,
       2, 4, 2, 1,
       1, 2, 4, 2,
       2, 1, 2, 4;
  return M * (h * h / 36.0);
}

HelmholtzElement helmholtz_element_matrices(double r, double h) {
  if (!(r >= 0.0)) throw std::invalid_argument("filter radius must be non-negative");
  if (!(h > 0.0)) throw std::invalid_argument("element size must be positive");
  const Matrix4 M = mass_element_matrix(h);
  return {r * r * laplacian_element_matrix() + M, M * Vector4::Ones()};
}

}  // namespace romtopt
