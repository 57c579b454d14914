#pragma once

#include "oracles.hpp"
#include "romtopt/problem.hpp"

#include <Eigen/Dense>

namespace fixtures {

using romtopt::Matrix;
using romtopt::Vector;

/// Toy cantilever (clamped left edge, whole right edge loaded) built through the library.
inline romtopt::TopOptProblem toy(int nx, int ny, double R = 1.0, const std::string& objective = "compliance") {
  romtopt::ProblemSpec spec = romtopt::cantilever_toy(nx, ny, 1.0, R);
  spec.objective = objective;
  return romtopt::build_problem(spec);
}

inline Matrix dense(const romtopt::SparseMatrix& A) { return Matrix(A); }

inline double rel(const Matrix& a, const Matrix& b) { return (a - b).norm() / b.norm(); }

}  // namespace fixtures
