#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mslab/field.hpp"
#include "mslab/model.hpp"
#include "mslab/problem.hpp"
#include "mslab/scheme.hpp"

namespace mslab {

/// Uniform time grid t_n = t_start + n tau, n = 0..steps().
struct TimeGrid {
  double t_start = 0.0;
  double t_end = 1.0;
  double tau = 0.1;

  /// Snaps a nominal step to tau = (t_end - t_start) / round((t_end - t_start) / tau_nominal).
  static TimeGrid uniform(double t_start, double t_end, double tau_nominal);

  /// Throws std::invalid_argument unless (t_end - t_start)/tau is integral
  /// within 1e-9 relative.
  void validate() const;
  [[nodiscard]] int steps() const;
  [[nodiscard]] double time(int n) const { return t_start + n * tau; }
};

enum class FailurePolicy { Abort, AcceptAndFlag };

struct StepRecord {
  int step = 0;
  double time = 0.0;
  IterationTrace trace;
  StepStatus status = StepStatus::Converged;
  std::string message;
};

struct Snapshot {
  int step = 0;
  double time = 0.0;
  Field u;
  Field w;
  Field v;
};

/// v-update used after u_n is known: (model, u_n, v_prev, tau) -> v_n.
using SubstrateUpdate =
    std::function<Field(const ModelSystem&, const Field& u_n, const Field& v_prev, double tau)>;

struct RunOptions {
  std::string run_id = "run";
  std::vector<double> snapshot_times;
  /// Keep (u_n, w_n, v_n) for every step; needed for space-time errors.
  bool store_all_steps = false;
  FailurePolicy on_failure = FailurePolicy::Abort;
  /// Overrides the a-priori bound u_breve (otherwise computed from u0).
  std::optional<double> u_breve;
  /// Replaces the mu-dependent v-update (decoupling experiments).
  SubstrateUpdate substrate_update;
  std::string config_snapshot;
};

struct RunRecord {
  std::string run_id;
  std::string config_snapshot;
  std::string scheme_label;
  double scheme_parameter = 0.0;
  double gamma = 0.0;
  double tau = 0.0;
  double h = 0.0;

  std::vector<StepRecord> steps;
  std::vector<Snapshot> snapshots;
  /// Index n holds the fields at t_n (n = 0 is the initial state) when
  /// store_all_steps is set.
  std::vector<Snapshot> history;

  double u_breve = 0.0;
  double max_u = 0.0;
  double min_v = 0.0;
  /// tau >= 1/g_M: substrate positivity is not guaranteed and not asserted.
  bool tau_exceeds_disc = false;
  std::vector<std::string> invariant_violations;
  int v_stiffness_assemblies = 0;

  double average_iterations = 0.0;  // mean over converged steps
  int failed_steps = 0;
  bool aborted = false;
  double wall_time_seconds = 0.0;

  [[nodiscard]] int total_iterations() const;
};

/// (v_n, eta) + tau (D(u_n) grad v_n, grad eta) = tau (g(u_n, v_prev), eta) + (v_prev, eta)
/// on P1 with Dirichlet lifting. Requires mu = 1. `stiffness_assemblies` is
/// incremented once per assembled D-weighted stiffness when non-null.
Field update_v_pde(const FeProblem& problem, const ModelSystem& model, const Field& u_n,
                   const Field& v_prev, double tau, int* stiffness_assemblies = nullptr);

/// Cellwise v_n = v_prev + tau g(u_n, v_prev) on P0 (exact P0 projection). Requires mu = 0.
Field update_v_ode(const ModelSystem& model, const Field& u_n, const Field& v_prev, double tau);

/// Outer time loop: for each step solve for u_n, then update v_n. Runtime
/// invariants (u_n >= 0, u_n <= u_breve + 1e-3, v_n >= -1e-10 when
/// tau < 1/g_M) are checked every step and reported in
/// `invariant_violations`.
///
/// Throws std::invalid_argument when tau >= 1/f_M or the inputs live in the
/// wrong spaces (u0 must be P0; v0 P1 for mu = 1 and P0 for mu = 0).
RunRecord run(const ModelSystem& model, const FeProblem& problem, const TimeGrid& grid,
              const SchemeConfig& scheme, const Field& u0, const Field& v0,
              const RunOptions& options = {});

/// u_breve for a run starting from u0 over the whole grid.
double run_u_breve(const ModelSystem& model, const FeProblem& problem, const TimeGrid& grid,
                   const Field& u0);

/// w^0 for the first step: vertex average of Phi_breve(u0), zero on constrained vertices.
Field initial_w(const FeProblem& problem, const RegularizedPhi& phi_breve, const Field& u0);

/// Phi_breve for a run (identity for b = infinity).
RegularizedPhi run_regularization(const ModelSystem& model, double u_breve);

}  // namespace mslab
