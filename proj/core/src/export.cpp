#include "romtopt/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace romtopt {

namespace {

void check_size(const Vector& rho, int nx, int ny) {
  if (nx < 1 || ny < 1 || rho.size() != static_cast<Eigen::Index>(nx) * ny) {
    throw std::invalid_argument("density field does not match the grid size");
  }
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

ExportFormat parse_export_format(const std::string& name) {
  if (name == "pgm") return ExportFormat::Pgm;
  if (name == "vtk") return ExportFormat::Vtk;
  if (name == "csv") return ExportFormat::Csv;
  throw std::invalid_argument("unknown export format '" + name + "' (available: pgm, vtk, csv)");
}

void write_pgm(const Vector& rho, int nx, int ny, const std::string& path) {
  check_size(rho, nx, ny);
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out << "P5\n" << nx << ' ' << ny << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(nx));
  for (int j = ny - 1; j >= 0; --j) {
    for (int i = 0; i < nx; ++i) {
      const double r = std::clamp(rho[static_cast<Eigen::Index>(j) * nx + i], 0.0, 1.0);
      row[static_cast<std::size_t>(i)] = static_cast<unsigned char>(std::lround(255.0 * (1.0 - r)));
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  finish(out, path);
}

void write_vtk(const Vector& rho, const StructuredMesh& mesh, const std::string& path) {
  check_size(rho, mesh.nx(), mesh.ny());
  auto out = open_out(path);
  char buf[64];
  out << "# vtk DataFile Version 3.0\nfiltered density\nASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << mesh.nx() + 1 << ' ' << mesh.ny() + 1 << " 1\n";
  out << "ORIGIN 0 0 0\n";
  std::snprintf(buf, sizeof buf, "SPACING %.17g %.17g 1\n", mesh.h(), mesh.h());
  out << buf;
  out << "CELL_DATA " << mesh.elem_count() << "\nSCALARS density double 1\nLOOKUP_TABLE default\n";
  for (Eigen::Index e = 0; e < rho.size(); ++e) {
    std::snprintf(buf, sizeof buf, "%.17g\n", rho[e]);
    out << buf;
  }
  finish(out, path);
}

void write_csv(const Vector& rho, int nx, int ny, const std::string& path) {
  check_size(rho, nx, ny);
  auto out = open_out(path);
  char buf[32];
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", rho[static_cast<Eigen::Index>(j) * nx + i]);
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
  finish(out, path);
}

DensityGrid read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<double> values;
  DensityGrid grid;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    int count = 0;
    while (std::getline(ss, cell, ',')) {
      values.push_back(std::stod(cell));
      ++count;
    }
    if (grid.ny == 0) grid.nx = count;
    if (count != grid.nx) throw std::runtime_error("'" + path + "' has ragged rows");
    ++grid.ny;
  }
  grid.rho = Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
  return grid;
}

void export_density(const Vector& rho, const StructuredMesh& mesh, const std::string& path,
                    ExportFormat format) {
  switch (format) {
    case ExportFormat::Pgm: write_pgm(rho, mesh.nx(), mesh.ny(), path); break;
    case ExportFormat::Vtk: write_vtk(rho, mesh, path); break;
    case ExportFormat::Csv: write_csv(rho, mesh.nx(), mesh.ny(), path); break;
  }
}

}  // namespace romtopt
