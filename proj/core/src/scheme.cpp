#include "mslab/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mslab/linear_solver.hpp"

namespace mslab {

void SchemeConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("scheme: tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("scheme: max_iter must be >= 1");
  if (!(divergence_threshold > 0.0))
    throw std::invalid_argument("scheme: divergence_threshold must be > 0");
  if (const auto* l = std::get_if<LScheme>(&kind)) {
    if (!(l->L > 0.0)) throw std::invalid_argument("scheme: L must be > 0");
    return;
  }
  const double p = parameter();
  const double g = gamma();
  if (!(p > 0.0)) throw std::invalid_argument("scheme: M must be > 0");
  if (!(g > 0.0 && g <= 1.0)) throw std::invalid_argument("scheme: gamma must lie in (0, 1]");
}

std::string SchemeConfig::label() const {
  if (std::holds_alternative<LScheme>(kind)) return "L";
  if (std::holds_alternative<MScheme>(kind)) return "M";
  return "Newton";
}

double SchemeConfig::parameter() const {
  if (const auto* l = std::get_if<LScheme>(&kind)) return l->L;
  if (const auto* m = std::get_if<MScheme>(&kind)) return m->M;
  return std::get<NewtonScheme>(kind).m_reg;
}

double SchemeConfig::gamma() const {
  if (const auto* m = std::get_if<MScheme>(&kind)) return m->gamma;
  if (const auto* n = std::get_if<NewtonScheme>(&kind)) return n->gamma;
  return 0.0;
}

const char* to_string(StepStatus status) {
  switch (status) {
    case StepStatus::Converged:
      return "converged";
    case StepStatus::NonConvergence:
      return "non_convergence";
    case StepStatus::Divergence:
      return "divergence";
  }
  return "unknown";
}

void IterationTrace::record(double error) {
  if (!errors.empty() && errors.back() > 0.0)
    contraction_estimates.push_back(error / errors.back());
  errors.push_back(error);
  ++iterations;
}

Field l_factor_field(const SchemeConfig& config, const RegularizedPhi& phi_breve,
                     const Field& u_prev_iter, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("l_factor_field: tau must be > 0");
  if (u_prev_iter.space() != Space::P0)
    throw std::invalid_argument("l_factor_field: expects a P0 iterate");

  Field l_field = Field::p0(u_prev_iter.mesh());
  if (const auto* l = std::get_if<LScheme>(&config.kind)) {
    for (int c = 0; c < l_field.size(); ++c) l_field[c] = l->L;
    return l_field;
  }
  const double shift = config.parameter() * std::pow(tau, config.gamma());
  for (int c = 0; c < l_field.size(); ++c)
    l_field[c] = std::max(phi_breve.derivative(u_prev_iter[c]) + shift, 2.0 * shift);
  return l_field;
}

Field growth_factor_field(const ModelSystem& model, const Field& v_prev, double tau) {
  const Mesh& mesh = v_prev.mesh();
  Field h = Field::p0(mesh);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    h[c] = 1.0 - tau * model.f(v_prev.cell_mean(c));
    if (!(h[c] > 0.0)) {
      std::ostringstream msg;
      msg << "growth factor 1 - tau f(v) = " << h[c] << " <= 0 in cell " << c
          << "; tau must be < 1/f_M";
      throw std::invalid_argument(msg.str());
    }
  }
  return h;
}

LinearIterate linear_iteration(const FeProblem& problem, const Field& h_field,
                               const Field& u_prev_time, const Field& u_prev_iter,
                               const Field& l_field, const RegularizedPhi& phi_breve,
                               double tau) {
  const Mesh& mesh = problem.mesh();
  const int nv = mesh.vertices_per_cell();
  const double share = 1.0 / nv;  // int_c phi_j = |c| / (dim + 1)

  // u~_c = a_c + mean_c(w) / L_c
  std::vector<double> offset(mesh.num_cells());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.num_cells()) * nv * nv);
  Vector rhs = Vector::Zero(mesh.num_vertices());

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double lc = l_field[c];
    const double hc = h_field[c];
    if (!(lc > 0.0)) throw std::invalid_argument("linear_iteration: L must be > 0");
    if (!(hc > 0.0)) throw std::invalid_argument("linear_iteration: h must be > 0");
    const double uc = u_prev_iter[c];
    offset[c] = uc - phi_breve.value(uc) / lc;

    const double measure = mesh.measure(c);
    const double coupling = hc * measure * share * share / lc;
    const double load = measure * share * (u_prev_time[c] - hc * offset[c]);
    const auto& cell = mesh.cell(c);
    for (int a = 0; a < nv; ++a) {
      rhs[cell[a]] += load;
      for (int b = 0; b < nv; ++b) triplets.emplace_back(cell[a], cell[b], coupling);
    }
  }

  SparseMatrix system(mesh.num_vertices(), mesh.num_vertices());
  system.setFromTriplets(triplets.begin(), triplets.end());
  system += tau * problem.stiffness();

  const Vector w_values = solve_constrained(system, rhs, problem.w_constraint());

  LinearIterate out{Field::p0(mesh), Field::p1(mesh)};
  for (int i = 0; i < mesh.num_vertices(); ++i) out.w[i] = w_values[i];
  for (int c = 0; c < mesh.num_cells(); ++c)
    out.u_tilde[c] = offset[c] + out.w.cell_mean(c) / l_field[c];
  return out;
}

Field clip_positive(const Field& u_tilde) {
  Field out = u_tilde;
  for (int i = 0; i < out.size(); ++i) out[i] = std::max(out[i], 0.0);
  return out;
}

double stopping_error(const Field& u_i, const Field& u_prev, const Field& w_i,
                      const Field& w_prev, const Field& l_field, double tau) {
  const Mesh& mesh = u_i.mesh();
  double err_u = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double d = u_i[c] - u_prev[c];
    err_u += l_field[c] * d * d * mesh.measure(c);
  }
  return err_u + tau * gradient_energy(w_i - w_prev);
}

StepResult solve_nonlinear_step(const FeProblem& problem, const ModelSystem& model,
                                const RegularizedPhi& phi_breve, const SchemeConfig& config,
                                const Field& u_prev_time, const Field& v_prev,
                                const Field& w_initial, double tau,
                                const IterationObserver& observer) {
  const Field h_field = growth_factor_field(model, v_prev, tau);

  StepResult result{u_prev_time, w_initial, {}, StepStatus::NonConvergence, {}};
  for (int i = 1; i <= config.max_iter; ++i) {
    const Field l_field = l_factor_field(config, phi_breve, result.u, tau);
    LinearIterate iterate{Field::p0(problem.mesh()), Field::p1(problem.mesh())};
    try {
      iterate =
          linear_iteration(problem, h_field, u_prev_time, result.u, l_field, phi_breve, tau);
    } catch (const SolverError& e) {
      result.status = StepStatus::Divergence;
      result.message = e.what();
      return result;
    }
    Field u_next = clip_positive(iterate.u_tilde);
    const double error = stopping_error(u_next, result.u, iterate.w, result.w, l_field, tau);
    result.trace.record(error);
    result.u = std::move(u_next);
    result.w = std::move(iterate.w);
    if (observer) observer(i, result.u, result.w);

    if (!std::isfinite(error) || error > config.divergence_threshold) {
      result.status = StepStatus::Divergence;
      result.message = "stopping functional blew up at iteration " + std::to_string(i);
      return result;
    }
    if (error < config.tol) {
      result.status = StepStatus::Converged;
      result.trace.converged = true;
      return result;
    }
  }
  result.message = "max_iter reached";
  return result;
}

ConsistencyResidual consistency_residual(const FeProblem& problem, const Field& h_field,
                                         const Field& u_prev_time, const Field& u,
                                         const Field& w, const RegularizedPhi& phi_breve,
                                         double tau) {
  const Mesh& mesh = problem.mesh();
  const int nv = mesh.vertices_per_cell();
  Vector r = tau * (problem.stiffness() * to_vector(w));
  double constitutive = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double share = mesh.measure(c) / nv;
    const auto& cell = mesh.cell(c);
    for (int a = 0; a < nv; ++a) r[cell[a]] += share * (h_field[c] * u[c] - u_prev_time[c]);
    const double d = w.cell_mean(c) - phi_breve.value(u[c]);
    constitutive += d * d * mesh.measure(c);
  }
  double momentum = 0.0;
  for (int i = 0; i < mesh.num_vertices(); ++i)
    if (!problem.w_constraint().is_fixed(i)) momentum += r[i] * r[i];
  return {std::sqrt(momentum), std::sqrt(constitutive)};
}

}  // namespace mslab
