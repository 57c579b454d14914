#pragma once

#include <cmath>
#include <stdexcept>

namespace romtopt {

/// SIMP-type interpolation alpha(rho) = rho_l + (1 - rho_l) rho^p.
struct MaterialModel {
  double rho_min = 1e-3;
  double penal = 3.0;

  double alpha(double rho) const { return rho_min + (1.0 - rho_min) * std::pow(rho, penal); }
  double dalpha(double rho) const {
    return (1.0 - rho_min) * penal * std::pow(rho, penal - 1.0);
  }

  void validate() const {
    if (!(rho_min > 0.0 && rho_min < 1.0)) throw std::invalid_argument("rho_min must lie in (0, 1)");
    if (!(penal >= 1.0)) throw std::invalid_argument("penalization exponent must be >= 1");
  }
};

}  // namespace romtopt
