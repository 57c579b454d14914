#pragma once

#include "romtopt/elasticity.hpp"
#include "romtopt/element.hpp"
#include "romtopt/mma.hpp"

#include <memory>
#include <string>
#include <vector>

namespace romtopt {

enum class Boundary { Left, Right, Bottom, Top };

/// Fixes the selected components on every node of an edge.
struct EdgeSupport {
  Boundary edge;
  bool fix_x = false;
  bool fix_y = false;
};

/// Fixes the selected components of the node nearest to (x, y).
struct NodeSupport {
  double x = 0.0;
  double y = 0.0;
  bool fix_x = false;
  bool fix_y = false;
};

/// Uniform traction (qx, qy) per unit length on the part [from, to] of an edge.
/// Positions run along x for horizontal edges and along y for vertical ones.
struct SegmentLoad {
  Boundary edge;
  double from = 0.0;
  double to = 0.0;
  double qx = 0.0;
  double qy = 0.0;
};

struct ProblemSpec {
  std::string name;
  int nx = 1;
  int ny = 1;
  double h = 1.0;
  double filter_radius = 0.0;  ///< characteristic radius R
  double filter_r_over_R = 0.0;  ///< Helmholtz length r = filter_r_over_R * R
  double volume_fraction = 0.5;
  double psi0 = 0.5;
  std::vector<EdgeSupport> edge_supports;
  std::vector<NodeSupport> node_supports;
  std::vector<SegmentLoad> loads;
  std::string objective = "compliance";
  double E0 = 1.0;
  double poisson = 0.3;
  PlaneModel plane = PlaneModel::Stress;
  MaterialModel material;

  /// Canonical one-line-per-field text; also the input of `hash()`.
  std::string describe() const;
  std::uint64_t hash() const { return hash_string(describe()); }
  void validate() const;
};

/// Names accepted by builtin_problem.
std::vector<std::string> builtin_problem_names();
/// mbb, mbb-small, cantilever, ssbeam.
ProblemSpec builtin_problem(const std::string& name);

/// Clamped left edge, downward unit traction over the whole right edge.
ProblemSpec cantilever_toy(int nx, int ny, double h, double R, double volume_fraction = 0.5);

/// Fixed dofs (2 * node + component) for the supports of `spec`, sorted, unique.
std::vector<int> fixed_dofs(const ProblemSpec& spec, const StructuredMesh& mesh);

/// Consistent nodal loads of all segment loads on the full dof vector.
Vector consistent_load(const ProblemSpec& spec, const StructuredMesh& mesh);

/// Everything needed to evaluate one topology optimization problem.
struct TopOptProblem {
  ProblemSpec spec;
  std::shared_ptr<SolveStats> stats;
  std::shared_ptr<const HelmholtzFilter> filter;
  std::unique_ptr<ElasticityModel> model;
  std::unique_ptr<Objective> objective;
  VolumeConstraint volume;
  Vector psi0;

  const StructuredMesh& mesh() const { return model->mesh(); }
};

TopOptProblem build_problem(const ProblemSpec& spec);

}  // namespace romtopt
