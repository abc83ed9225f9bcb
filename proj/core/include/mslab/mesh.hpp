#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace mslab {

using Point = std::array<double, 2>;

/// Boundary sides of the interval / rectangle. Bit flags so that corner
/// vertices can carry two sides.
enum class Side : std::uint8_t { Left = 1, Right = 2, Bottom = 4, Top = 8 };

inline constexpr std::array<Side, 4> kAllSides{Side::Left, Side::Right, Side::Bottom, Side::Top};

const char* side_name(Side side);

struct Interval {
  double a = 0.0;
  double b = 1.0;
  bool operator==(const Interval&) const = default;
};

struct Rectangle {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;
  bool operator==(const Rectangle&) const = default;
};

/// Uniform simplicial mesh in 1D (segments) or 2D (right triangles from a
/// structured split of a rectangle grid).
///
/// Geometry that the assembly routines need per cell (measure, barycentric
/// gradients, centroid) is precomputed on construction; the mesh is
/// immutable afterwards.
class Mesh {
 public:
  using Cell = std::array<int, 3>;

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] int num_vertices() const noexcept { return static_cast<int>(vertices_.size()); }
  [[nodiscard]] int num_cells() const noexcept { return static_cast<int>(cells_.size()); }
  /// dim + 1
  [[nodiscard]] int vertices_per_cell() const noexcept { return dim_ + 1; }

  [[nodiscard]] const Point& vertex(int i) const { return vertices_[i]; }
  [[nodiscard]] const std::vector<Point>& vertices() const noexcept { return vertices_; }
  [[nodiscard]] const Cell& cell(int c) const { return cells_[c]; }
  [[nodiscard]] double measure(int c) const { return measures_[c]; }
  [[nodiscard]] const Point& centroid(int c) const { return centroids_[c]; }
  /// Gradient of the barycentric (hat) function of local vertex k on cell c.
  [[nodiscard]] const Point& grad_lambda(int c, int k) const { return grads_[c][k]; }

  /// Bitwise-or of Side flags for vertex i (0 for interior vertices).
  [[nodiscard]] std::uint8_t boundary_flags(int i) const { return boundary_flags_[i]; }
  [[nodiscard]] bool on_side(int i, Side side) const {
    return (boundary_flags_[i] & static_cast<std::uint8_t>(side)) != 0;
  }

  /// Largest grid spacing (cell length in 1D, largest triangle leg in 2D).
  [[nodiscard]] double spacing() const noexcept { return spacing_; }
  /// Largest cell diameter.
  [[nodiscard]] double max_diameter() const noexcept { return max_diameter_; }
  /// Diameter of the whole domain.
  [[nodiscard]] double domain_diameter() const noexcept { return domain_diameter_; }
  [[nodiscard]] double domain_measure() const noexcept { return domain_measure_; }
  [[nodiscard]] const Rectangle& bounds() const noexcept { return bounds_; }

  friend Mesh build_mesh(const Interval& domain, double h_target);
  friend Mesh build_mesh(const Rectangle& domain, double h_target);

 private:
  Mesh() = default;
  void finalize();

  int dim_ = 1;
  std::vector<Point> vertices_;
  std::vector<Cell> cells_;
  std::vector<std::uint8_t> boundary_flags_;
  std::vector<double> measures_;
  std::vector<Point> centroids_;
  std::vector<std::array<Point, 3>> grads_;
  double spacing_ = 0.0;
  double max_diameter_ = 0.0;
  double domain_diameter_ = 0.0;
  double domain_measure_ = 0.0;
  Rectangle bounds_{};
};

/// Uniform partition of [a, b] with cell length <= h_target.
Mesh build_mesh(const Interval& domain, double h_target);

/// Structured triangulation of a rectangle: nx * ny squares (spacing <=
/// h_target in each direction), each split along its diagonal into two right
/// triangles.
Mesh build_mesh(const Rectangle& domain, double h_target);

}  // namespace mslab
