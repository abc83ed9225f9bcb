#include "mslab/linear_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mslab {

DirichletConstraint::DirichletConstraint(int num_dofs)
    : free_index_(num_dofs, 0), values_(num_dofs, 0.0) {
  renumber();
}

DirichletConstraint DirichletConstraint::on_sides(const Mesh& mesh, std::uint8_t side_mask,
                                                  double value) {
  DirichletConstraint constraint(mesh.num_vertices());
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    if ((mesh.boundary_flags(i) & side_mask) != 0) {
      constraint.free_index_[i] = -1;
      constraint.values_[i] = value;
    }
  }
  constraint.renumber();
  return constraint;
}

void DirichletConstraint::fix(int dof, double value) {
  free_index_.at(dof) = -1;
  values_[dof] = value;
  renumber();
}

void DirichletConstraint::renumber() {
  num_free_ = 0;
  for (int& idx : free_index_) idx = idx < 0 ? -1 : num_free_++;
}

void SpdSolver::factorize(const SparseMatrix& a) {
  a_ = a;
  ldlt_.compute(a_);
  if (ldlt_.info() != Eigen::Success)
    throw SolverError("SpdSolver: LDL^T factorization failed (matrix not SPD?)");
  // LDL^T succeeds on some indefinite matrices; SPD requires a positive D.
  if ((ldlt_.vectorD().array() <= 0.0).any())
    throw SolverError("SpdSolver: non-positive pivot, matrix is not positive definite");
  a_norm_ = 0.0;
  for (int col = 0; col < a_.outerSize(); ++col) {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(a_, col); it; ++it) sum += std::abs(it.value());
    a_norm_ = std::max(a_norm_, sum);  // column sums; equals the row-sum norm for symmetric A
  }
  ready_ = true;
}

Vector SpdSolver::solve(const Vector& rhs) const {
  if (!ready_) throw SolverError("SpdSolver: solve called before factorize");
  const double rhs_norm = rhs.lpNorm<Eigen::Infinity>();
  if (rhs_norm == 0.0) return Vector::Zero(rhs.size());

  Vector x = ldlt_.solve(rhs);
  const auto bound = [&](const Vector& y) {
    return rel_tol_ * (a_norm_ * y.lpNorm<Eigen::Infinity>() + rhs_norm);
  };
  Vector residual = rhs - a_ * x;
  double res_norm = residual.lpNorm<Eigen::Infinity>();
  for (int refine = 0; refine < 8 && res_norm > bound(x); ++refine) {
    const Vector next_x = x + ldlt_.solve(residual);
    const Vector next_residual = rhs - a_ * next_x;
    const double next = next_residual.lpNorm<Eigen::Infinity>();
    if (!(next < res_norm)) break;
    x = next_x;
    residual = next_residual;
    res_norm = next;
  }
  if (!std::isfinite(res_norm) || !x.allFinite() || res_norm > bound(x)) {
    std::ostringstream msg;
    msg << "SpdSolver: backward error check failed, residual " << res_norm << " > "
        << rel_tol_ << " * (||A|| ||x|| + ||b||) = " << bound(x);
    throw SolverError(msg.str());
  }
  return x;
}

Vector solve_spd(const SparseMatrix& a, const Vector& rhs) {
  SpdSolver solver;
  solver.factorize(a);
  return solver.solve(rhs);
}

Vector solve_constrained(const SparseMatrix& a, const Vector& rhs,
                         const DirichletConstraint& constraint) {
  const int n = constraint.num_dofs();
  if (a.rows() != n || a.cols() != n || rhs.size() != n)
    throw std::invalid_argument("solve_constrained: dimension mismatch");

  Vector x(n);
  if (constraint.num_free() == n) {
    return solve_spd(a, rhs);
  }

  const int nf = constraint.num_free();
  Vector reduced_rhs(nf);
  for (int i = 0; i < n; ++i) {
    if (constraint.is_fixed(i))
      x[i] = constraint.value(i);
    else
      reduced_rhs[constraint.free_index(i)] = rhs[i];
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(a.nonZeros()));
  for (int col = 0; col < a.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      const int row = static_cast<int>(it.row());
      const int fr = constraint.free_index(row);
      if (fr < 0) continue;
      const int fc = constraint.free_index(col);
      if (fc < 0)
        reduced_rhs[fr] -= it.value() * constraint.value(col);
      else
        triplets.emplace_back(fr, fc, it.value());
    }
  }
  if (nf == 0) return x;

  SparseMatrix reduced(nf, nf);
  reduced.setFromTriplets(triplets.begin(), triplets.end());
  const Vector xf = solve_spd(reduced, reduced_rhs);
  for (int i = 0; i < n; ++i)
    if (!constraint.is_fixed(i)) x[i] = xf[constraint.free_index(i)];
  return x;
}

}  // namespace mslab
