#include "mslab/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mslab {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const Field& field) {
  const Mesh& mesh = field.mesh();
  const bool two_d = mesh.dim() == 2;
  out << (two_d ? "x,y,value\n" : "x,value\n");
  for (int i = 0; i < field.size(); ++i) {
    const Point& p = field.space() == Space::P1 ? mesh.vertex(i) : mesh.centroid(i);
    out << format_double(p[0]) << ',';
    if (two_d) out << format_double(p[1]) << ',';
    out << format_double(field[i]) << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Field& field) {
  auto out = open_for_write(path);
  write_csv(out, field);
}

void write_vtk(std::ostream& out, const Mesh& mesh,
               const std::vector<std::pair<std::string, const Field*>>& fields) {
  const int nv = mesh.vertices_per_cell();
  out << "# vtk DataFile Version 3.0\nmslab field snapshot\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const Point& p : mesh.vertices())
    out << format_double(p[0]) << ' ' << format_double(p[1]) << " 0\n";
  out << "CELLS " << mesh.num_cells() << ' ' << mesh.num_cells() * (nv + 1) << '\n';
  for (int c = 0; c < mesh.num_cells(); ++c) {
    out << nv;
    for (int k = 0; k < nv; ++k) out << ' ' << mesh.cell(c)[k];
    out << '\n';
  }
  // 3 = VTK_LINE, 5 = VTK_TRIANGLE
  out << "CELL_TYPES " << mesh.num_cells() << '\n';
  for (int c = 0; c < mesh.num_cells(); ++c) out << (mesh.dim() == 1 ? 3 : 5) << '\n';

  for (Space space : {Space::P1, Space::P0}) {
    bool header = false;
    for (const auto& [name, field] : fields) {
      if (&field->mesh() != &mesh) throw std::invalid_argument("write_vtk: field on another mesh");
      if (field->space() != space) continue;
      if (!header) {
        out << (space == Space::P1 ? "POINT_DATA " : "CELL_DATA ") << field->size() << '\n';
        header = true;
      }
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (int i = 0; i < field->size(); ++i) out << format_double((*field)[i]) << '\n';
    }
  }
}

void write_vtk(const std::filesystem::path& path, const Mesh& mesh,
               const std::vector<std::pair<std::string, const Field*>>& fields) {
  auto out = open_for_write(path);
  write_vtk(out, mesh, fields);
}

}  // namespace mslab
