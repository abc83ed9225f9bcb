#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mslab/field.hpp"

namespace mslab {

/// Shortest round-trip-safe text for a double (17 significant digits).
std::string format_double(double value);

/// CSV snapshot: header `x,value` (1D) or `x,y,value` (2D); one row per
/// vertex for P1 and per cell centroid for P0.
void write_csv(std::ostream& out, const Field& field);
void write_csv(const std::filesystem::path& path, const Field& field);

/// Legacy-VTK unstructured grid (ASCII). P1 fields become POINT_DATA, P0
/// fields CELL_DATA. All fields must share `mesh`.
void write_vtk(std::ostream& out, const Mesh& mesh,
               const std::vector<std::pair<std::string, const Field*>>& fields);
void write_vtk(const std::filesystem::path& path, const Mesh& mesh,
               const std::vector<std::pair<std::string, const Field*>>& fields);

}  // namespace mslab
