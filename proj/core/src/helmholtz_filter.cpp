#include "romtopt/helmholtz_filter.hpp"

#include <cmath>
#include <string>

namespace romtopt {

namespace {

SparseMatrix assemble_helmholtz(const StructuredMesh& mesh, const HelmholtzElement& element) {
  std::vector<int> scatter;
  scatter.reserve(static_cast<std::size_t>(mesh.elem_count()) * 4);
  for (int e = 0; e < mesh.elem_count(); ++e) {
    for (int n : mesh.element_nodes(e)) scatter.push_back(n);
  }
  AssemblyPattern pattern(mesh.node_count(), 4, scatter);
  std::vector<double> ones(mesh.elem_count(), 1.0);
  return pattern.assemble(element.stiffness, ones);
}

void check_length(const Vector& v, int expected, const char* what) {
  if (v.size() != expected) {
    throw std::invalid_argument(std::string(what) + " has length " + std::to_string(v.size()) +
                                ", expected " + std::to_string(expected));
  }
}

}  // namespace

HelmholtzFilter::HelmholtzFilter(const StructuredMesh& mesh, double r)
    : mesh_(mesh),
      r_(r),
      element_(helmholtz_element_matrices(r, mesh.h())),
      H_(assemble_helmholtz(mesh_, element_)),
      factor_(H_) {}

double HelmholtzFilter::length_from_radius(double R) { return R / (2.0 * std::sqrt(3.0)); }

FilteredDensity HelmholtzFilter::filter(const Vector& psi) const {
  check_length(psi, mesh_.elem_count(), "design vector");
  Vector b = Vector::Zero(mesh_.node_count());
  for (int e = 0; e < mesh_.elem_count(); ++e) {
    const auto& nodes = mesh_.element_nodes(e);
    for (int a = 0; a < 4; ++a) b[nodes[a]] += psi[e] * element_.load[a];
  }
  FilteredDensity out;
  out.phi = factor_.solve(b);
  out.rho.resize(mesh_.elem_count());
  for (int e = 0; e < mesh_.elem_count(); ++e) {
    const auto& nodes = mesh_.element_nodes(e);
    out.rho[e] = 0.25 * (out.phi[nodes[0]] + out.phi[nodes[1]] + out.phi[nodes[2]] + out.phi[nodes[3]]);
  }
  return out;
}

Vector HelmholtzFilter::apply_adjoint(const Vector& v) const {
  check_length(v, mesh_.elem_count(), "element vector");
  Vector q = Vector::Zero(mesh_.node_count());
  for (int e = 0; e < mesh_.elem_count(); ++e) {
    for (int n : mesh_.element_nodes(e)) q[n] += 0.25 * v[e];
  }
  const Vector mu = factor_.solve(q);
  Vector w(mesh_.elem_count());
  for (int e = 0; e < mesh_.elem_count(); ++e) {
    const auto& nodes = mesh_.element_nodes(e);
    double s = 0.0;
    for (int a = 0; a < 4; ++a) s += element_.load[a] * mu[nodes[a]];
    w[e] = s;
  }
  return w;
}

}  // namespace romtopt
