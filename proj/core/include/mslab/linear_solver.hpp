#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/SparseCholesky>

#include "mslab/assembly.hpp"

namespace mslab {

/// Raised when a factorization fails or the residual contract cannot be met;
/// on assembled operators this signals a non-SPD assembly.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Prescribed vertex values for a P1 unknown. Unconstrained vertices are
/// "free"; solves eliminate the fixed ones and lift their values into the
/// right-hand side.
class DirichletConstraint {
 public:
  explicit DirichletConstraint(int num_dofs = 0);

  /// Fix every vertex that lies on one of the sides in `side_mask`.
  static DirichletConstraint on_sides(const Mesh& mesh, std::uint8_t side_mask, double value);

  void fix(int dof, double value);

  [[nodiscard]] int num_dofs() const noexcept { return static_cast<int>(free_index_.size()); }
  [[nodiscard]] int num_free() const noexcept { return num_free_; }
  [[nodiscard]] bool is_fixed(int dof) const { return free_index_[dof] < 0; }
  [[nodiscard]] double value(int dof) const { return values_[dof]; }
  /// Position of a free dof in the reduced system, -1 for fixed dofs.
  [[nodiscard]] int free_index(int dof) const { return free_index_[dof]; }

 private:
  void renumber();

  std::vector<int> free_index_;
  std::vector<double> values_;
  int num_free_ = 0;
};

/// Sparse LDL^T with iterative refinement. The solve contract is a normwise
/// backward error: ||A x - b||_inf <= rel_tol (||A||_inf ||x||_inf + ||b||_inf),
/// otherwise SolverError.
class SpdSolver {
 public:
  explicit SpdSolver(double rel_tol = 1e-12) : rel_tol_(rel_tol) {}

  void factorize(const SparseMatrix& a);
  [[nodiscard]] Vector solve(const Vector& rhs) const;

 private:
  double rel_tol_;
  double a_norm_ = 0.0;
  SparseMatrix a_;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  bool ready_ = false;
};

/// One-shot solve of an SPD system.
Vector solve_spd(const SparseMatrix& a, const Vector& rhs);

/// Solves A x = rhs with Dirichlet elimination and boundary lifting. `a` and
/// `rhs` are the full (all-dof) operator and load; fixed entries of the result
/// equal their prescribed values.
Vector solve_constrained(const SparseMatrix& a, const Vector& rhs,
                         const DirichletConstraint& constraint);

}  // namespace mslab
