#include "mslab/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mslab {

const char* space_name(Space space) { return space == Space::P0 ? "P0" : "P1"; }

Field::Field(const Mesh& mesh, Space space, std::vector<double> values)
    : mesh_(&mesh), space_(space), values_(std::move(values)) {
  const int expected = space == Space::P0 ? mesh.num_cells() : mesh.num_vertices();
  if (static_cast<int>(values_.size()) != expected)
    throw std::invalid_argument(std::string("Field: value count does not match ") +
                                space_name(space) + " space size");
}

Field Field::p0(const Mesh& mesh, double value) {
  return Field(mesh, Space::P0, std::vector<double>(mesh.num_cells(), value));
}
Field Field::p1(const Mesh& mesh, double value) {
  return Field(mesh, Space::P1, std::vector<double>(mesh.num_vertices(), value));
}
Field Field::p0(const Mesh& mesh, std::vector<double> values) {
  return Field(mesh, Space::P0, std::move(values));
}
Field Field::p1(const Mesh& mesh, std::vector<double> values) {
  return Field(mesh, Space::P1, std::move(values));
}

double Field::eval(int c, std::span<const double> lambda) const {
  if (space_ == Space::P0) return values_[c];
  const auto& cell = mesh_->cell(c);
  double s = 0.0;
  for (int k = 0; k < mesh_->vertices_per_cell(); ++k) s += lambda[k] * values_[cell[k]];
  return s;
}

double Field::cell_mean(int c) const {
  if (space_ == Space::P0) return values_[c];
  const auto& cell = mesh_->cell(c);
  const int nv = mesh_->vertices_per_cell();
  double s = 0.0;
  for (int k = 0; k < nv; ++k) s += values_[cell[k]];
  return s / nv;
}

double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }
double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }

const QuadratureRule& quadrature_rule(int dim) {
  static const QuadratureRule rule1d = [] {
    const double a = 0.5 * (1.0 - std::sqrt(0.6));
    const double b = 0.5 * (1.0 + std::sqrt(0.6));
    QuadratureRule r;
    r.points = {{1.0 - a, a, 0.0}, {0.5, 0.5, 0.0}, {1.0 - b, b, 0.0}};
    r.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    return r;
  }();
  static const QuadratureRule rule2d = [] {
    QuadratureRule r;
    r.points = {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
                {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
                {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}};
    r.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    return r;
  }();
  return dim == 1 ? rule1d : rule2d;
}

Point map_to_cell(const Mesh& mesh, int c, std::span<const double> lambda) {
  const auto& cell = mesh.cell(c);
  Point p{0.0, 0.0};
  for (int k = 0; k < mesh.vertices_per_cell(); ++k) {
    const Point& v = mesh.vertex(cell[k]);
    p[0] += lambda[k] * v[0];
    p[1] += lambda[k] * v[1];
  }
  return p;
}

Field sample_p0(const Mesh& mesh, const ScalarFunction& fn) {
  std::vector<double> values(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) values[c] = fn(mesh.centroid(c));
  return Field::p0(mesh, std::move(values));
}

Field interpolate_p1(const Mesh& mesh, const ScalarFunction& fn) {
  std::vector<double> values(mesh.num_vertices());
  for (int i = 0; i < mesh.num_vertices(); ++i) values[i] = fn(mesh.vertex(i));
  return Field::p1(mesh, std::move(values));
}

Field to_p0(const Field& field) {
  if (field.space() == Space::P0) return field;
  const Mesh& mesh = field.mesh();
  std::vector<double> values(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) values[c] = field.cell_mean(c);
  return Field::p0(mesh, std::move(values));
}

Field to_p1_average(const Field& field) {
  if (field.space() == Space::P1) return field;
  const Mesh& mesh = field.mesh();
  std::vector<double> sum(mesh.num_vertices(), 0.0);
  std::vector<double> weight(mesh.num_vertices(), 0.0);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cell(c);
    for (int k = 0; k < mesh.vertices_per_cell(); ++k) {
      sum[cell[k]] += mesh.measure(c) * field[c];
      weight[cell[k]] += mesh.measure(c);
    }
  }
  for (int i = 0; i < mesh.num_vertices(); ++i) sum[i] /= weight[i];
  return Field::p1(mesh, std::move(sum));
}

double integral(const Field& field) {
  const Mesh& mesh = field.mesh();
  double s = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) s += field.cell_mean(c) * mesh.measure(c);
  return s;
}

namespace {

// int weight * (a - b)^2 with b optional; exact for P0, quadrature otherwise.
template <class Other>
double squared_distance(const Field& a, const Other& other, const Field* weight) {
  const Mesh& mesh = a.mesh();
  if (weight && (!weight->same_mesh(a) || weight->space() != Space::P0))
    throw std::invalid_argument("l2: weight must be a P0 field on the same mesh");
  const QuadratureRule& rule = quadrature_rule(mesh.dim());
  double total = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    double cell_sum = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const std::span<const double> lambda(rule.points[q]);
      const double d = a.eval(c, lambda) - other(c, lambda);
      cell_sum += rule.weights[q] * d * d;
    }
    total += (weight ? (*weight)[c] : 1.0) * cell_sum * mesh.measure(c);
  }
  return total;
}

void require_same_mesh(const Field& a, const Field& b) {
  if (!a.same_mesh(b)) throw std::invalid_argument("l2_distance: fields live on different meshes");
}

}  // namespace

double l2_norm(const Field& field) {
  return std::sqrt(squared_distance(field, [](int, std::span<const double>) { return 0.0; },
                                    nullptr));
}

double l2_norm(const Field& field, const Field& weight) {
  return std::sqrt(squared_distance(field, [](int, std::span<const double>) { return 0.0; },
                                    &weight));
}

double l2_distance(const Field& a, const Field& b) {
  require_same_mesh(a, b);
  return std::sqrt(squared_distance(
      a, [&b](int c, std::span<const double> lambda) { return b.eval(c, lambda); }, nullptr));
}

double l2_distance(const Field& a, const Field& b, const Field& weight) {
  require_same_mesh(a, b);
  return std::sqrt(squared_distance(
      a, [&b](int c, std::span<const double> lambda) { return b.eval(c, lambda); }, &weight));
}

double l2_distance(const Field& a, const ScalarFunction& fn) {
  const Mesh& mesh = a.mesh();
  return std::sqrt(squared_distance(
      a,
      [&mesh, &fn](int c, std::span<const double> lambda) {
        return fn(map_to_cell(mesh, c, lambda));
      },
      nullptr));
}

double gradient_energy(const Field& p1) {
  if (p1.space() != Space::P1) throw std::invalid_argument("gradient_energy: expects a P1 field");
  const Mesh& mesh = p1.mesh();
  double total = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cell(c);
    double gx = 0.0, gy = 0.0;
    for (int k = 0; k < mesh.vertices_per_cell(); ++k) {
      gx += p1[cell[k]] * mesh.grad_lambda(c, k)[0];
      gy += p1[cell[k]] * mesh.grad_lambda(c, k)[1];
    }
    total += (gx * gx + gy * gy) * mesh.measure(c);
  }
  return total;
}

Field operator-(const Field& a, const Field& b) {
  if (!a.compatible(b)) throw std::invalid_argument("Field subtraction: incompatible fields");
  Field out = a;
  for (int i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

}  // namespace mslab
