#pragma once

#include <array>
#include <memory>
#include <string>
#include <variant>

#include "mslab/assembly.hpp"
#include "mslab/linear_solver.hpp"
#include "mslab/mesh.hpp"

namespace mslab {

struct DirichletZero {
  bool operator==(const DirichletZero&) const = default;
};
struct DirichletValue {
  double value = 0.0;
  bool operator==(const DirichletValue&) const = default;
};
struct NeumannZero {
  bool operator==(const NeumannZero&) const = default;
};
using BoundaryCondition = std::variant<DirichletZero, DirichletValue, NeumannZero>;

std::string to_string(const BoundaryCondition& bc);

/// Per-side boundary conditions for u and v, indexed in kAllSides order
/// (left, right, bottom, top). In 1D only left/right are used.
///
/// u admits DirichletZero or NeumannZero only; the condition on u is imposed
/// on w = Phi(u).
struct BoundarySpec {
  std::array<BoundaryCondition, 4> u{DirichletZero{}, DirichletZero{}, DirichletZero{},
                                     DirichletZero{}};
  std::array<BoundaryCondition, 4> v{DirichletZero{}, DirichletZero{}, DirichletZero{},
                                     DirichletZero{}};

  static BoundarySpec all(BoundaryCondition u_bc, BoundaryCondition v_bc);
  /// Throws std::invalid_argument if u carries an inhomogeneous value.
  void validate() const;
  bool operator==(const BoundarySpec&) const = default;
};

int side_index(Side side);

/// Mesh, boundary description and the parameter-independent operators of
/// one spatial discretisation. Immutable after construction and cheap to
/// copy (the mesh is shared, so fields created on it stay valid).
class FeProblem {
 public:
  FeProblem(Mesh mesh, BoundarySpec bc);

  [[nodiscard]] const Mesh& mesh() const noexcept { return *mesh_; }
  [[nodiscard]] std::shared_ptr<const Mesh> shared_mesh() const noexcept { return mesh_; }
  [[nodiscard]] const BoundarySpec& boundary() const noexcept { return bc_; }

  /// Homogeneous constraint for w on the sides where u is DirichletZero.
  [[nodiscard]] const DirichletConstraint& w_constraint() const noexcept { return w_constraint_; }
  /// Constraint for a P1 substrate v (Dirichlet sides with their values).
  [[nodiscard]] const DirichletConstraint& v_constraint() const noexcept { return v_constraint_; }

  /// Unit-weight P1 stiffness matrix.
  [[nodiscard]] const SparseMatrix& stiffness() const noexcept { return stiffness_; }
  /// Consistent P1 mass matrix.
  [[nodiscard]] const SparseMatrix& mass() const noexcept { return mass_; }

 private:
  std::shared_ptr<const Mesh> mesh_;
  BoundarySpec bc_;
  DirichletConstraint w_constraint_;
  DirichletConstraint v_constraint_;
  SparseMatrix stiffness_;
  SparseMatrix mass_;
};

}  // namespace mslab
