#include "mslab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mslab {

namespace {

int cells_for(double extent, double h_target) {
  // Tolerate round-off such as 2/0.01 = 200.00000000000003.
  const double ratio = extent / h_target;
  return std::max(1, static_cast<int>(std::ceil(ratio * (1.0 - 1e-12))));
}

double distance(const Point& a, const Point& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

}  // namespace

const char* side_name(Side side) {
  switch (side) {
    case Side::Left:
      return "left";
    case Side::Right:
      return "right";
    case Side::Bottom:
      return "bottom";
    case Side::Top:
      return "top";
  }
  return "unknown";
}

void Mesh::finalize() {
  const int nc = num_cells();
  measures_.assign(nc, 0.0);
  centroids_.assign(nc, Point{0.0, 0.0});
  grads_.assign(nc, {});
  max_diameter_ = 0.0;

  for (int c = 0; c < nc; ++c) {
    const Cell& cell = cells_[c];
    if (dim_ == 1) {
      const double x0 = vertices_[cell[0]][0];
      const double x1 = vertices_[cell[1]][0];
      const double len = x1 - x0;
      if (!(len > 0.0)) throw std::logic_error("mesh: non-positive cell length");
      measures_[c] = len;
      centroids_[c] = {0.5 * (x0 + x1), 0.0};
      grads_[c][0] = {-1.0 / len, 0.0};
      grads_[c][1] = {1.0 / len, 0.0};
      max_diameter_ = std::max(max_diameter_, len);
    } else {
      const Point& p0 = vertices_[cell[0]];
      const Point& p1 = vertices_[cell[1]];
      const Point& p2 = vertices_[cell[2]];
      const double area2 = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
      if (!(area2 > 0.0)) throw std::logic_error("mesh: non-positive triangle area");
      measures_[c] = 0.5 * area2;
      centroids_[c] = {(p0[0] + p1[0] + p2[0]) / 3.0, (p0[1] + p1[1] + p2[1]) / 3.0};
      grads_[c][0] = {(p1[1] - p2[1]) / area2, (p2[0] - p1[0]) / area2};
      grads_[c][1] = {(p2[1] - p0[1]) / area2, (p0[0] - p2[0]) / area2};
      grads_[c][2] = {(p0[1] - p1[1]) / area2, (p1[0] - p0[0]) / area2};
      max_diameter_ =
          std::max({max_diameter_, distance(p0, p1), distance(p1, p2), distance(p0, p2)});
    }
  }
}

Mesh build_mesh(const Interval& domain, double h_target) {
  if (!(h_target > 0.0)) throw std::invalid_argument("build_mesh: h_target must be > 0");
  const double extent = domain.b - domain.a;
  if (!(extent > 0.0)) throw std::invalid_argument("build_mesh: interval has non-positive extent");

  const int n = cells_for(extent, h_target);
  Mesh mesh;
  mesh.dim_ = 1;
  mesh.vertices_.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double x = i == n ? domain.b : domain.a + extent * static_cast<double>(i) / n;
    mesh.vertices_[i] = {x, 0.0};
  }
  mesh.cells_.resize(n);
  for (int c = 0; c < n; ++c) mesh.cells_[c] = {c, c + 1, -1};
  mesh.boundary_flags_.assign(n + 1, 0);
  mesh.boundary_flags_[0] = static_cast<std::uint8_t>(Side::Left);
  mesh.boundary_flags_[n] = static_cast<std::uint8_t>(Side::Right);
  mesh.spacing_ = extent / n;
  mesh.domain_diameter_ = extent;
  mesh.domain_measure_ = extent;
  mesh.bounds_ = {domain.a, domain.b, 0.0, 0.0};
  mesh.finalize();
  return mesh;
}

Mesh build_mesh(const Rectangle& domain, double h_target) {
  if (!(h_target > 0.0)) throw std::invalid_argument("build_mesh: h_target must be > 0");
  const double lx = domain.x1 - domain.x0;
  const double ly = domain.y1 - domain.y0;
  if (!(lx > 0.0) || !(ly > 0.0))
    throw std::invalid_argument("build_mesh: rectangle has non-positive extent");

  const int nx = cells_for(lx, h_target);
  const int ny = cells_for(ly, h_target);
  Mesh mesh;
  mesh.dim_ = 2;
  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

  mesh.vertices_.resize(static_cast<std::size_t>(nx + 1) * (ny + 1));
  mesh.boundary_flags_.assign(mesh.vertices_.size(), 0);
  for (int j = 0; j <= ny; ++j) {
    const double y = j == ny ? domain.y1 : domain.y0 + ly * static_cast<double>(j) / ny;
    for (int i = 0; i <= nx; ++i) {
      const double x = i == nx ? domain.x1 : domain.x0 + lx * static_cast<double>(i) / nx;
      const int v = vid(i, j);
      mesh.vertices_[v] = {x, y};
      std::uint8_t flags = 0;
      if (i == 0) flags |= static_cast<std::uint8_t>(Side::Left);
      if (i == nx) flags |= static_cast<std::uint8_t>(Side::Right);
      if (j == 0) flags |= static_cast<std::uint8_t>(Side::Bottom);
      if (j == ny) flags |= static_cast<std::uint8_t>(Side::Top);
      mesh.boundary_flags_[v] = flags;
    }
  }

  mesh.cells_.reserve(static_cast<std::size_t>(2) * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      mesh.cells_.push_back({v00, v10, v11});
      mesh.cells_.push_back({v00, v11, v01});
    }
  }
  mesh.spacing_ = std::max(lx / nx, ly / ny);
  mesh.domain_diameter_ = std::hypot(lx, ly);
  mesh.domain_measure_ = lx * ly;
  mesh.bounds_ = domain;
  mesh.finalize();
  return mesh;
}

}  // namespace mslab
