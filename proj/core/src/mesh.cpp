#include "romtopt/mesh.hpp"

#include <algorithm>
#include <string>

namespace romtopt {

StructuredMesh::StructuredMesh(int nx, int ny, double h) : nx_(nx), ny_(ny), h_(h) {
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("mesh needs at least one element per axis, got " +
                                std::to_string(nx) + "x" + std::to_string(ny));
  }
  if (!(h > 0.0)) throw std::invalid_argument("element size must be positive");

  elem_nodes_.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      elem_nodes_.push_back({node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)});
    }
  }
}

std::array<int, 8> StructuredMesh::element_dofs(int e) const {
  const auto& n = elem_nodes_[e];
  std::array<int, 8> dofs{};
  for (int a = 0; a < 4; ++a) {
    dofs[2 * a] = 2 * n[a];
    dofs[2 * a + 1] = 2 * n[a] + 1;
  }
  return dofs;
}

StructuredMesh build_mesh(int nx, int ny, double h) { return StructuredMesh(nx, ny, h); }

DofMap::DofMap(const StructuredMesh& mesh, const std::vector<int>& fixed_dofs) {
  const int total = 2 * mesh.node_count();
  to_free_.assign(total, 0);
  for (int d : fixed_dofs) {
    if (d < 0 || d >= total) throw std::invalid_argument("fixed dof out of range");
    to_free_[d] = -1;
  }
  for (int d = 0; d < total; ++d) {
    if (to_free_[d] == -1) continue;
    to_free_[d] = static_cast<int>(to_full_.size());
    to_full_.push_back(d);
  }
  elem_free_.resize(mesh.elem_count());
  for (int e = 0; e < mesh.elem_count(); ++e) {
    const auto dofs = mesh.element_dofs(e);
    for (int a = 0; a < 8; ++a) elem_free_[e][a] = to_free_[dofs[a]];
  }
}

Vector DofMap::expand(const Vector& free_values) const {
  if (free_values.size() != free_dofs()) throw std::invalid_argument("free vector size mismatch");
  Vector full = Vector::Zero(total_dofs());
  for (int i = 0; i < free_dofs(); ++i) full[to_full_[i]] = free_values[i];
  return full;
}

Vector DofMap::restrict(const Vector& full_values) const {
  if (full_values.size() != total_dofs()) throw std::invalid_argument("full vector size mismatch");
  Vector out(free_dofs());
  for (int i = 0; i < free_dofs(); ++i) out[i] = full_values[to_full_[i]];
  return out;
}

}  // namespace romtopt
