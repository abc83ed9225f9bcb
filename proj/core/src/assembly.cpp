#include "mslab/assembly.hpp"

#include <stdexcept>
#include <vector>

namespace mslab {

namespace {

using Triplet = Eigen::Triplet<double>;

SparseMatrix stiffness_impl(const Mesh& mesh, const std::function<double(int)>& weight) {
  const int nv = mesh.vertices_per_cell();
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.num_cells()) * nv * nv);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double wc = weight(c);
    if (!(wc > 0.0)) throw std::invalid_argument("assemble_stiffness_p1: weight must be > 0");
    const auto& cell = mesh.cell(c);
    const double scale = wc * mesh.measure(c);
    for (int a = 0; a < nv; ++a) {
      const Point& ga = mesh.grad_lambda(c, a);
      for (int b = 0; b < nv; ++b) {
        const Point& gb = mesh.grad_lambda(c, b);
        triplets.emplace_back(cell[a], cell[b], scale * (ga[0] * gb[0] + ga[1] * gb[1]));
      }
    }
  }
  SparseMatrix k(mesh.num_vertices(), mesh.num_vertices());
  k.setFromTriplets(triplets.begin(), triplets.end());
  return k;
}

}  // namespace

SparseMatrix assemble_stiffness_p1(const Mesh& mesh, double weight) {
  return stiffness_impl(mesh, [weight](int) { return weight; });
}

SparseMatrix assemble_stiffness_p1(const Mesh& mesh, const Field& weight) {
  if (weight.space() != Space::P0 || &weight.mesh() != &mesh)
    throw std::invalid_argument("assemble_stiffness_p1: weight must be P0 on the same mesh");
  return stiffness_impl(mesh, [&weight](int c) { return weight[c]; });
}

SparseMatrix assemble_mass_p1(const Mesh& mesh) {
  const int nv = mesh.vertices_per_cell();
  // Diagonal 2/((d+1)(d+2)) |c|, off-diagonal 1/((d+1)(d+2)) |c|.
  const double denom = (mesh.dim() + 1.0) * (mesh.dim() + 2.0);
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.num_cells()) * nv * nv);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cell(c);
    const double m = mesh.measure(c) / denom;
    for (int a = 0; a < nv; ++a)
      for (int b = 0; b < nv; ++b) triplets.emplace_back(cell[a], cell[b], a == b ? 2.0 * m : m);
  }
  SparseMatrix mass(mesh.num_vertices(), mesh.num_vertices());
  mass.setFromTriplets(triplets.begin(), triplets.end());
  return mass;
}

SparseMatrix assemble_mixed_mass(const Mesh& mesh, const Field& coeff) {
  if (coeff.space() != Space::P0 || &coeff.mesh() != &mesh)
    throw std::invalid_argument("assemble_mixed_mass: coefficient must be P0 on the same mesh");
  const int nv = mesh.vertices_per_cell();
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.num_cells()) * nv);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cell(c);
    const double value = coeff[c] * mesh.measure(c) / nv;
    for (int a = 0; a < nv; ++a) triplets.emplace_back(cell[a], c, value);
  }
  SparseMatrix b(mesh.num_vertices(), mesh.num_cells());
  b.setFromTriplets(triplets.begin(), triplets.end());
  return b;
}

Vector assemble_load_p1(
    const Mesh& mesh,
    const std::function<double(int, const Point&, std::span<const double>)>& fn) {
  const QuadratureRule& rule = quadrature_rule(mesh.dim());
  const int nv = mesh.vertices_per_cell();
  Vector load = Vector::Zero(mesh.num_vertices());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cell(c);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const std::span<const double> lambda(rule.points[q]);
      const double value = fn(c, map_to_cell(mesh, c, lambda), lambda);
      const double scale = rule.weights[q] * mesh.measure(c) * value;
      for (int a = 0; a < nv; ++a) load[cell[a]] += scale * lambda[a];
    }
  }
  return load;
}

}  // namespace mslab
