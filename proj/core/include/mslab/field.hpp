#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mslab/mesh.hpp"

namespace mslab {

/// P0: one value per cell. P1: one value per vertex (continuous, piecewise linear).
enum class Space { P0, P1 };

const char* space_name(Space space);

/// A discrete scalar field on a mesh. The mesh must outlive the field.
class Field {
 public:
  static Field p0(const Mesh& mesh, double value = 0.0);
  static Field p1(const Mesh& mesh, double value = 0.0);
  static Field p0(const Mesh& mesh, std::vector<double> values);
  static Field p1(const Mesh& mesh, std::vector<double> values);

  [[nodiscard]] Space space() const noexcept { return space_; }
  [[nodiscard]] const Mesh& mesh() const noexcept { return *mesh_; }
  [[nodiscard]] int size() const noexcept { return static_cast<int>(values_.size()); }

  double& operator[](int i) { return values_[i]; }
  double operator[](int i) const { return values_[i]; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<double> values() noexcept { return values_; }

  /// Value inside cell c at barycentric coordinates `lambda`.
  [[nodiscard]] double eval(int c, std::span<const double> lambda) const;
  /// Mean over cell c (exact for both spaces).
  [[nodiscard]] double cell_mean(int c) const;

  [[nodiscard]] double max() const;
  [[nodiscard]] double min() const;

  /// Same mesh object and same space.
  [[nodiscard]] bool compatible(const Field& other) const noexcept {
    return mesh_ == other.mesh_ && space_ == other.space_;
  }
  [[nodiscard]] bool same_mesh(const Field& other) const noexcept { return mesh_ == other.mesh_; }

 private:
  Field(const Mesh& mesh, Space space, std::vector<double> values);

  const Mesh* mesh_;
  Space space_;
  std::vector<double> values_;
};

using ScalarFunction = std::function<double(const Point&)>;

/// Quadrature on a cell in barycentric coordinates; weights sum to 1.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

/// 3-point Gauss (1D) / 3-point interior barycentric rule (2D); both exact
/// for quadratics, so P1*P1 products integrate exactly.
const QuadratureRule& quadrature_rule(int dim);

/// Physical coordinates of barycentric point `lambda` in cell c.
Point map_to_cell(const Mesh& mesh, int c, std::span<const double> lambda);

/// Centroid samples of an analytic function.
Field sample_p0(const Mesh& mesh, const ScalarFunction& fn);
/// Vertex interpolant of an analytic function.
Field interpolate_p1(const Mesh& mesh, const ScalarFunction& fn);

/// Cell means of a field (P1 -> P0; identity for P0).
Field to_p0(const Field& field);
/// Measure-weighted average of adjacent cell values at every vertex.
Field to_p1_average(const Field& field);

double integral(const Field& field);

/// L2 norm, optionally weighted by a positive P0 field: sqrt(int weight f^2).
double l2_norm(const Field& field);
double l2_norm(const Field& field, const Field& weight);

/// L2 distance between two fields on the same mesh (spaces may differ).
/// Throws std::invalid_argument on mesh mismatch.
double l2_distance(const Field& a, const Field& b);
double l2_distance(const Field& a, const Field& b, const Field& weight);

/// L2 distance between a field and an analytic function.
double l2_distance(const Field& a, const ScalarFunction& fn);

/// int |grad f|^2 for a P1 field (cellwise constant gradients, exact).
double gradient_energy(const Field& p1);

Field operator-(const Field& a, const Field& b);

}  // namespace mslab
