#pragma once

#include "romtopt/types.hpp"

#include <array>
#include <vector>

namespace romtopt {

/// Rectangular grid of congruent square Q1 elements.
///
/// Nodes are numbered row-major with x fastest: node(i, j) = j * (nx + 1) + i.
/// Element (i, j) has index j * nx + i and references its nodes
/// counter-clockwise starting at the lower-left corner. Vector fields carry
/// two dofs per node, (2 * node, 2 * node + 1) for (x, y).
class StructuredMesh {
 public:
  StructuredMesh(int nx, int ny, double h);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  int node_count() const { return (nx_ + 1) * (ny_ + 1); }
  int elem_count() const { return nx_ * ny_; }
  double element_area() const { return h_ * h_; }
  double width() const { return nx_ * h_; }
  double height() const { return ny_ * h_; }
  double area() const { return width() * height(); }

  int node(int i, int j) const { return j * (nx_ + 1) + i; }
  double node_x(int node) const { return (node % (nx_ + 1)) * h_; }
  double node_y(int node) const { return (node / (nx_ + 1)) * h_; }

  /// Scalar scatter map (Q_e): the four node indices of element e.
  const std::array<int, 4>& element_nodes(int e) const { return elem_nodes_[e]; }
  /// Vector scatter map (P_e): the eight unconstrained dof indices of element e.
  std::array<int, 8> element_dofs(int e) const;

 private:
  int nx_;
  int ny_;
  double h_;
  std::vector<std::array<int, 4>> elem_nodes_;
};

StructuredMesh build_mesh(int nx, int ny, double h);

/// Maps the 2 * node_count vector dofs to the free (non-Dirichlet) numbering.
///
/// Fixed dofs are eliminated: they have no free index and never appear in
/// solution vectors.
class DofMap {
 public:
  DofMap(const StructuredMesh& mesh, const std::vector<int>& fixed_dofs);

  int total_dofs() const { return static_cast<int>(to_free_.size()); }
  int free_dofs() const { return static_cast<int>(to_full_.size()); }
  /// Free index of a full dof, or -1 if the dof is fixed.
  int free_index(int dof) const { return to_free_[dof]; }
  int full_index(int free) const { return to_full_[free]; }

  /// Element scatter map in free numbering; fixed dofs appear as -1.
  const std::array<int, 8>& element_free_dofs(int e) const { return elem_free_[e]; }

  Vector expand(const Vector& free_values) const;
  Vector restrict(const Vector& full_values) const;

 private:
  std::vector<int> to_free_;
  std::vector<int> to_full_;
  std::vector<std::array<int, 8>> elem_free_;
};

}  // namespace romtopt
