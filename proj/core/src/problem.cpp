#include "romtopt/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace romtopt {

namespace {

const char* boundary_name(Boundary b) {
  switch (b) {
    case Boundary::Left: return "left";
    case Boundary::Right: return "right";
    case Boundary::Bottom: return "bottom";
    case Boundary::Top: return "top";
  }
  return "?";
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Nodes along an edge, ordered by increasing position.
std::vector<int> edge_nodes(const StructuredMesh& mesh, Boundary edge) {
  std::vector<int> nodes;
  switch (edge) {
    case Boundary::Bottom:
    case Boundary::Top: {
      const int j = edge == Boundary::Bottom ? 0 : mesh.ny();
      for (int i = 0; i <= mesh.nx(); ++i) nodes.push_back(mesh.node(i, j));
      break;
    }
    case Boundary::Left:
    case Boundary::Right: {
      const int i = edge == Boundary::Left ? 0 : mesh.nx();
      for (int j = 0; j <= mesh.ny(); ++j) nodes.push_back(mesh.node(i, j));
      break;
    }
  }
  return nodes;
}

double edge_length(const StructuredMesh& mesh, Boundary edge) {
  return edge == Boundary::Bottom || edge == Boundary::Top ? mesh.width() : mesh.height();
}

}  // namespace

std::string ProblemSpec::describe() const {
  std::ostringstream os;
  os << "name=" << name << "\n"
     << "mesh=" << nx << "x" << ny << " h=" << num(h) << "\n"
     << "domain=" << num(nx * h) << "x" << num(ny * h) << "\n"
     << "filter_radius=" << num(filter_radius) << " r_over_R=" << num(filter_r_over_R) << "\n"
     << "volume_fraction=" << num(volume_fraction) << " psi0=" << num(psi0) << "\n"
     << "material E0=" << num(E0) << " poisson=" << num(poisson)
     << " plane=" << (plane == PlaneModel::Stress ? "stress" : "strain")
     << " rho_min=" << num(material.rho_min) << " penal=" << num(material.penal) << "\n"
     << "objective=" << objective << "\n";
  for (const auto& s : edge_supports) {
    os << "support edge=" << boundary_name(s.edge) << " fix=" << (s.fix_x ? "x" : "")
       << (s.fix_y ? "y" : "") << "\n";
  }
  for (const auto& s : node_supports) {
    os << "support node=(" << num(s.x) << "," << num(s.y) << ") fix=" << (s.fix_x ? "x" : "")
       << (s.fix_y ? "y" : "") << "\n";
  }
  for (const auto& l : loads) {
    os << "load edge=" << boundary_name(l.edge) << " [" << num(l.from) << "," << num(l.to)
       << "] q=(" << num(l.qx) << "," << num(l.qy) << ")\n";
  }
  return os.str();
}

void ProblemSpec::validate() const {
  if (nx < 1 || ny < 1 || !(h > 0.0)) throw std::invalid_argument(name + ": invalid mesh size");
  if (!(filter_radius >= 0.0) || !(filter_r_over_R >= 0.0)) {
    throw std::invalid_argument(name + ": invalid filter radius");
  }
  material.validate();
  if (!(volume_fraction >= material.rho_min && volume_fraction <= 1.0)) {
    throw std::invalid_argument(name + ": volume fraction must lie in [rho_min, 1]");
  }
  if (!(psi0 >= 0.0 && psi0 <= 1.0)) throw std::invalid_argument(name + ": psi0 must lie in [0, 1]");
  if (loads.empty()) throw std::invalid_argument(name + ": no loads");
  if (edge_supports.empty() && node_supports.empty()) throw std::invalid_argument(name + ": no supports");
  for (const auto& s : node_supports) {
    if (s.x < -0.5 * h || s.x > nx * h + 0.5 * h || s.y < -0.5 * h || s.y > ny * h + 0.5 * h) {
      throw std::invalid_argument(name + ": node support outside the domain");
    }
  }
  for (const auto& l : loads) {
    const double len = (l.edge == Boundary::Bottom || l.edge == Boundary::Top) ? nx * h : ny * h;
    if (!(l.from < l.to) || l.to <= 0.0 || l.from >= len) {
      throw std::invalid_argument(name + ": load segment does not overlap its edge");
    }
  }
}

std::vector<std::string> builtin_problem_names() { return {"mbb", "mbb-small", "cantilever", "ssbeam"}; }

ProblemSpec builtin_problem(const std::string& name) {
  ProblemSpec s;
  s.name = name;
  s.filter_r_over_R = 1.0 / (2.0 * std::sqrt(3.0));
  if (name == "mbb" || name == "mbb-small") {
    const bool small = name == "mbb-small";
    s.nx = small ? 60 : 180;
    s.ny = small ? 20 : 60;
    s.h = 1.0 / s.ny;
    s.filter_radius = 0.12;
    s.volume_fraction = 0.5;
    s.psi0 = 0.5;
    s.edge_supports = {{Boundary::Left, true, false}};
    s.node_supports = {{3.0, 0.0, false, true}};
    s.loads = {{Boundary::Top, 0.0, 0.3, 0.0, -1.0}};
  } else if (name == "cantilever") {
    s.nx = 160;
    s.ny = 100;
    s.h = 1.0;
    s.filter_radius = 2.0;
    s.volume_fraction = 0.5;
    s.psi0 = 0.5;
    s.edge_supports = {{Boundary::Left, true, true}};
    s.loads = {{Boundary::Right, 48.5, 51.5, 0.0, -1.0}};
  } else if (name == "ssbeam") {
    s.nx = 180;
    s.ny = 90;
    s.h = 1.0;
    s.filter_radius = 0.5;
    s.volume_fraction = 0.4;
    s.psi0 = 0.4;
    s.node_supports = {{0.0, 0.0, true, true}, {180.0, 0.0, false, true}};
    s.loads = {{Boundary::Top, 88.5, 91.5, 0.0, -1.0}};
  } else {
    std::string known;
    for (const auto& n : builtin_problem_names()) known += (known.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown problem '" + name + "' (available: " + known + ")");
  }
  return s;
}

ProblemSpec cantilever_toy(int nx, int ny, double h, double R, double volume_fraction) {
  ProblemSpec s;
  s.name = "cantilever-toy";
  s.nx = nx;
  s.ny = ny;
  s.h = h;
  s.filter_radius = R;
  s.filter_r_over_R = 1.0 / (2.0 * std::sqrt(3.0));
  s.volume_fraction = volume_fraction;
  s.psi0 = volume_fraction;
  s.edge_supports = {{Boundary::Left, true, true}};
  s.loads = {{Boundary::Right, 0.0, ny * h, 0.0, -1.0}};
  return s;
}

std::vector<int> fixed_dofs(const ProblemSpec& spec, const StructuredMesh& mesh) {
  std::vector<int> dofs;
  auto fix = [&](int node, bool fx, bool fy) {
    if (fx) dofs.push_back(2 * node);
    if (fy) dofs.push_back(2 * node + 1);
  };
  for (const auto& s : spec.edge_supports) {
    for (int n : edge_nodes(mesh, s.edge)) fix(n, s.fix_x, s.fix_y);
  }
  for (const auto& s : spec.node_supports) {
    const int i = std::clamp(static_cast<int>(std::lround(s.x / mesh.h())), 0, mesh.nx());
    const int j = std::clamp(static_cast<int>(std::lround(s.y / mesh.h())), 0, mesh.ny());
    fix(mesh.node(i, j), s.fix_x, s.fix_y);
  }
  std::sort(dofs.begin(), dofs.end());
  dofs.erase(std::unique(dofs.begin(), dofs.end()), dofs.end());
  return dofs;
}

Vector consistent_load(const ProblemSpec& spec, const StructuredMesh& mesh) {
  Vector f = Vector::Zero(2 * mesh.node_count());
  const double h = mesh.h();
  for (const auto& l : spec.loads) {
    const std::vector<int> nodes = edge_nodes(mesh, l.edge);
    const double a = std::max(l.from, 0.0);
    const double b = std::min(l.to, edge_length(mesh, l.edge));
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      const double s0 = static_cast<double>(i) * h;
      const double s1 = s0 + h;
      const double lo = std::max(a, s0);
      const double hi = std::min(b, s1);
      if (hi <= lo) continue;
      // Integrals of the two linear shape functions over [lo, hi].
      const double w0 = ((s1 - lo) * (s1 - lo) - (s1 - hi) * (s1 - hi)) / (2.0 * h);
      const double w1 = ((hi - s0) * (hi - s0) - (lo - s0) * (lo - s0)) / (2.0 * h);
      f[2 * nodes[i]] += l.qx * w0;
      f[2 * nodes[i] + 1] += l.qy * w0;
      f[2 * nodes[i + 1]] += l.qx * w1;
      f[2 * nodes[i + 1] + 1] += l.qy * w1;
    }
  }
  return f;
}

TopOptProblem build_problem(const ProblemSpec& spec) {
  spec.validate();
  TopOptProblem p;
  p.spec = spec;
  const StructuredMesh mesh = build_mesh(spec.nx, spec.ny, spec.h);
  DofMap dofs(mesh, fixed_dofs(spec, mesh));
  const Vector f = dofs.restrict(consistent_load(spec, mesh));
  if (f.norm() == 0.0) throw std::invalid_argument(spec.name + ": all loads act on fixed dofs");
  p.stats = std::make_shared<SolveStats>();
  p.filter = std::make_shared<const HelmholtzFilter>(mesh, spec.filter_r_over_R * spec.filter_radius);
  p.model = std::make_unique<ElasticityModel>(
      mesh, std::move(dofs), elasticity_element_matrix(spec.E0, spec.poisson, spec.h, spec.plane), f,
      spec.material, p.filter, p.stats);
  p.objective = make_objective(spec.objective, f);
  p.volume.weights = Vector::Constant(mesh.elem_count(), mesh.element_area());
  p.volume.limit = spec.volume_fraction * mesh.area();
  p.psi0 = Vector::Constant(mesh.elem_count(), spec.psi0);
  return p;
}

}  // namespace romtopt
