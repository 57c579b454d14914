#pragma once

#include "romtopt/mesh.hpp"

#include <string>

namespace romtopt {

enum class ExportFormat { Pgm, Vtk, Csv };

ExportFormat parse_export_format(const std::string& name);

/// 8-bit binary PGM, one pixel per element, value round(255 (1 - rho)),
/// top row of elements first.
void write_pgm(const Vector& rho, int nx, int ny, const std::string& path);
/// Legacy ASCII VTK structured points with cell scalars "density".
void write_vtk(const Vector& rho, const StructuredMesh& mesh, const std::string& path);
/// One line per element row (bottom row first), comma separated.
void write_csv(const Vector& rho, int nx, int ny, const std::string& path);

struct DensityGrid {
  int nx = 0;
  int ny = 0;
  Vector rho;
};
DensityGrid read_csv(const std::string& path);

void export_density(const Vector& rho, const StructuredMesh& mesh, const std::string& path,
                    ExportFormat format);

}  // namespace romtopt
