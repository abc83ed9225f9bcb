#pragma once

/// @file assembly.hpp
/// @brief Exact P0/P1 operator assembly on simplicial meshes.
///
/// P1 gradients are constant per cell, so every element integral below is
/// evaluated in closed form; no quadrature is involved.

#include <Eigen/SparseCore>

#include "mslab/field.hpp"
#include "mslab/mesh.hpp"

namespace mslab {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// K[j,k] = sum_c weight_c int_c grad(phi_j) . grad(phi_k).
/// Throws std::invalid_argument for a non-positive weight.
SparseMatrix assemble_stiffness_p1(const Mesh& mesh, double weight = 1.0);
SparseMatrix assemble_stiffness_p1(const Mesh& mesh, const Field& weight);

/// Consistent P1 mass matrix: (h/6)[[2,1],[1,2]] in 1D, (A/12)[[2,1,1],[1,2,1],[1,1,2]] in 2D.
SparseMatrix assemble_mass_p1(const Mesh& mesh);

/// Rectangular P0 -> P1-dual map: B[j,c] = coeff_c int_c phi_j = coeff_c |c| / (dim+1).
SparseMatrix assemble_mixed_mass(const Mesh& mesh, const Field& coeff);

/// Load vector b_j = int f phi_j evaluated with the cell quadrature rule.
/// `fn(c, x)` receives the cell index and the physical point.
Vector assemble_load_p1(const Mesh& mesh,
                        const std::function<double(int, const Point&, std::span<const double>)>& fn);

inline Vector to_vector(const Field& f) {
  return Eigen::Map<const Vector>(f.values().data(), f.size());
}

}  // namespace mslab
