#include "mslab/stepper.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mslab/linear_solver.hpp"

namespace mslab {

TimeGrid TimeGrid::uniform(double t_start, double t_end, double tau_nominal) {
  if (!(t_end > t_start)) throw std::invalid_argument("TimeGrid: t_end must exceed t_start");
  if (!(tau_nominal > 0.0)) throw std::invalid_argument("TimeGrid: tau must be > 0");
  const double span = t_end - t_start;
  const double n = std::max(1.0, std::round(span / tau_nominal));
  return TimeGrid{t_start, t_end, span / n};
}

void TimeGrid::validate() const {
  if (!(t_end > t_start)) throw std::invalid_argument("TimeGrid: t_end must exceed t_start");
  if (!(tau > 0.0)) throw std::invalid_argument("TimeGrid: tau must be > 0");
  const double ratio = (t_end - t_start) / tau;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("TimeGrid: (t_end - t_start)/tau is not an integer");
}

int TimeGrid::steps() const { return static_cast<int>(std::round((t_end - t_start) / tau)); }

int RunRecord::total_iterations() const {
  int total = 0;
  for (const auto& s : steps) total += s.trace.iterations;
  return total;
}

Field update_v_pde(const FeProblem& problem, const ModelSystem& model, const Field& u_n,
                   const Field& v_prev, double tau, int* stiffness_assemblies) {
  if (model.mu != 1) throw std::invalid_argument("update_v_pde: requires mu = 1");
  if (v_prev.space() != Space::P1) throw std::invalid_argument("update_v_pde: v must be P1");
  const Mesh& mesh = problem.mesh();

  Field diffusivity = Field::p0(mesh);
  for (int c = 0; c < mesh.num_cells(); ++c) diffusivity[c] = model.D(u_n[c]);
  SparseMatrix system = problem.mass() + tau * assemble_stiffness_p1(mesh, diffusivity);
  if (stiffness_assemblies) ++*stiffness_assemblies;

  Vector rhs = problem.mass() * to_vector(v_prev);
  rhs += tau * assemble_load_p1(mesh, [&](int c, const Point&, std::span<const double> lambda) {
           return model.g(u_n[c], v_prev.eval(c, lambda));
         });

  const Vector v = solve_constrained(system, rhs, problem.v_constraint());
  Field out = Field::p1(mesh);
  for (int i = 0; i < out.size(); ++i) out[i] = v[i];
  return out;
}

Field update_v_ode(const ModelSystem& model, const Field& u_n, const Field& v_prev, double tau) {
  if (model.mu != 0) throw std::invalid_argument("update_v_ode: requires mu = 0");
  if (v_prev.space() != Space::P0) throw std::invalid_argument("update_v_ode: v must be P0");
  Field out = v_prev;
  for (int c = 0; c < out.size(); ++c) out[c] = v_prev[c] + tau * model.g(u_n[c], v_prev[c]);
  return out;
}

double run_u_breve(const ModelSystem& model, const FeProblem& problem, const TimeGrid& grid,
                   const Field& u0) {
  const double u0_sup = std::max(u0.max(), 0.0);
  double phi_sup = 0.0;
  if (model.phi.singular()) {
    for (int c = 0; c < u0.size(); ++c) phi_sup = std::max(phi_sup, model.phi.value(u0[c]));
  }
  return compute_u_breve(model, u0_sup, phi_sup, problem.mesh().domain_diameter(),
                         problem.mesh().dim(), grid.t_end - grid.t_start, grid.tau);
}

RegularizedPhi run_regularization(const ModelSystem& model, double u_breve) {
  return regularize(model.phi, u_breve);
}

Field initial_w(const FeProblem& problem, const RegularizedPhi& phi_breve, const Field& u0) {
  Field phi_u0 = Field::p0(problem.mesh());
  for (int c = 0; c < phi_u0.size(); ++c) phi_u0[c] = phi_breve.value(u0[c]);
  Field w = to_p1_average(phi_u0);
  const auto& constraint = problem.w_constraint();
  for (int i = 0; i < w.size(); ++i)
    if (constraint.is_fixed(i)) w[i] = 0.0;
  return w;
}

namespace {

bool wants_snapshot(const std::vector<double>& times, double t, double tau) {
  return std::any_of(times.begin(), times.end(),
                     [t, tau](double s) { return std::abs(s - t) <= 0.5 * tau; });
}

}  // namespace

RunRecord run(const ModelSystem& model, const FeProblem& problem, const TimeGrid& grid,
              const SchemeConfig& scheme, const Field& u0, const Field& v0,
              const RunOptions& options) {
  const auto wall_start = std::chrono::steady_clock::now();
  grid.validate();
  scheme.validate();
  if (model.f_M > 0.0 && grid.tau * model.f_M >= 1.0) {
    std::ostringstream msg;
    msg << "tau = " << grid.tau << " violates tau < 1/f_M = " << 1.0 / model.f_M;
    throw std::invalid_argument(msg.str());
  }
  if (u0.space() != Space::P0) throw std::invalid_argument("run: u0 must be a P0 field");
  const Space v_space = model.mu == 1 ? Space::P1 : Space::P0;
  if (v0.space() != v_space)
    throw std::invalid_argument(std::string("run: v0 must be ") + space_name(v_space) +
                                " for mu = " + std::to_string(model.mu));

  RunRecord record;
  record.run_id = options.run_id;
  record.config_snapshot = options.config_snapshot;
  record.scheme_label = scheme.label();
  record.scheme_parameter = scheme.parameter();
  record.gamma = scheme.gamma();
  record.tau = grid.tau;
  record.h = problem.mesh().spacing();
  record.u_breve = options.u_breve ? *options.u_breve : run_u_breve(model, problem, grid, u0);
  record.tau_exceeds_disc = model.g_M > 0.0 && grid.tau * model.g_M >= 1.0;

  const RegularizedPhi phi_breve = run_regularization(model, record.u_breve);

  SubstrateUpdate substrate = options.substrate_update;
  if (!substrate) {
    if (model.mu == 1) {
      substrate = [&problem, &record](const ModelSystem& m, const Field& u, const Field& v,
                                      double tau) {
        return update_v_pde(problem, m, u, v, tau, &record.v_stiffness_assemblies);
      };
    } else {
      substrate = [](const ModelSystem& m, const Field& u, const Field& v, double tau) {
        return update_v_ode(m, u, v, tau);
      };
    }
  }

  Field u = u0;
  Field v = v0;
  Field w = initial_w(problem, phi_breve, u0);
  record.max_u = u.max();
  record.min_v = v.min();

  if (options.store_all_steps) record.history.push_back({0, grid.t_start, u, w, v});
  if (wants_snapshot(options.snapshot_times, grid.t_start, grid.tau))
    record.snapshots.push_back({0, grid.t_start, u, w, v});

  const double upper = record.u_breve + 1e-3;
  int converged_steps = 0;
  long converged_iterations = 0;

  for (int n = 1; n <= grid.steps(); ++n) {
    const double t = grid.time(n);
    StepResult step = solve_nonlinear_step(problem, model, phi_breve, scheme, u, v, w, grid.tau);

    StepRecord sr{n, t, step.trace, step.status, step.message};
    record.steps.push_back(sr);
    if (step.status == StepStatus::Converged) {
      ++converged_steps;
      converged_iterations += step.trace.iterations;
    } else {
      ++record.failed_steps;
      if (options.on_failure == FailurePolicy::Abort) {
        record.aborted = true;
        break;
      }
    }

    const auto finite = [](const Field& f) {
      return std::all_of(f.values().begin(), f.values().end(),
                         [](double x) { return std::isfinite(x); });
    };
    if (!finite(step.u) || !finite(step.w)) {
      // A blown-up iterate cannot be carried forward; keep the previous state.
      step.u = u;
      step.w = w;
    }

    Field v_next = substrate(model, step.u, v, grid.tau);
    u = std::move(step.u);
    w = std::move(step.w);
    v = std::move(v_next);

    const double umax = u.max();
    const double umin = u.min();
    const double vmin = v.min();
    record.max_u = std::max(record.max_u, umax);
    record.min_v = std::min(record.min_v, vmin);
    if (umin < 0.0)
      record.invariant_violations.push_back("step " + std::to_string(n) + ": u < 0");
    if (umax > upper) {
      std::ostringstream msg;
      msg << "step " << n << ": max u = " << umax << " exceeds u_breve + 1e-3 = " << upper;
      record.invariant_violations.push_back(msg.str());
    }
    if (!record.tau_exceeds_disc && vmin < -1e-10) {
      std::ostringstream msg;
      msg << "step " << n << ": min v = " << vmin << " < -1e-10";
      record.invariant_violations.push_back(msg.str());
    }

    if (options.store_all_steps) record.history.push_back({n, t, u, w, v});
    if (wants_snapshot(options.snapshot_times, t, grid.tau))
      record.snapshots.push_back({n, t, u, w, v});
  }

  record.average_iterations =
      converged_steps > 0 ? static_cast<double>(converged_iterations) / converged_steps : 0.0;
  record.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return record;
}

}  // namespace mslab
