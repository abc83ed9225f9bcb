#include "mslab/problem.hpp"

#include "mslab/field_io.hpp"

#include <stdexcept>

namespace mslab {

std::string to_string(const BoundaryCondition& bc) {
  if (std::holds_alternative<DirichletZero>(bc)) return "dirichlet";
  if (const auto* d = std::get_if<DirichletValue>(&bc))
    return "dirichlet:" + format_double(d->value);
  return "neumann";
}

BoundarySpec BoundarySpec::all(BoundaryCondition u_bc, BoundaryCondition v_bc) {
  BoundarySpec spec;
  spec.u.fill(u_bc);
  spec.v.fill(v_bc);
  return spec;
}

void BoundarySpec::validate() const {
  for (const auto& bc : u) {
    if (const auto* d = std::get_if<DirichletValue>(&bc); d && d->value != 0.0)
      throw std::invalid_argument("boundary: u admits only homogeneous Dirichlet or Neumann");
  }
}

int side_index(Side side) {
  switch (side) {
    case Side::Left:
      return 0;
    case Side::Right:
      return 1;
    case Side::Bottom:
      return 2;
    case Side::Top:
      return 3;
  }
  return 0;
}

namespace {

DirichletConstraint build_constraint(const Mesh& mesh,
                                     const std::array<BoundaryCondition, 4>& sides) {
  DirichletConstraint constraint(mesh.num_vertices());
  for (Side side : kAllSides) {
    const auto& bc = sides[side_index(side)];
    if (std::holds_alternative<NeumannZero>(bc)) continue;
    const double value =
        std::holds_alternative<DirichletValue>(bc) ? std::get<DirichletValue>(bc).value : 0.0;
    for (int i = 0; i < mesh.num_vertices(); ++i)
      if (mesh.on_side(i, side)) constraint.fix(i, value);
  }
  return constraint;
}

}  // namespace

FeProblem::FeProblem(Mesh mesh, BoundarySpec bc)
    : mesh_(std::make_shared<const Mesh>(std::move(mesh))), bc_(std::move(bc)) {
  bc_.validate();
  w_constraint_ = build_constraint(*mesh_, bc_.u);
  v_constraint_ = build_constraint(*mesh_, bc_.v);
  stiffness_ = assemble_stiffness_p1(*mesh_, 1.0);
  mass_ = assemble_mass_p1(*mesh_);
}

}  // namespace mslab
