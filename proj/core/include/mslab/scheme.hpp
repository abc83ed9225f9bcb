#pragma once

/// @file scheme.hpp
/// @brief Splitting linearisation of one implicit time step.
///
/// One step of the time-discrete problem reads, with h = 1 - tau f(v_prev),
///
///   (h u, phi) + tau (grad w, grad phi) = (u_prev, phi)   for all P1 phi
///   w = Phi_breve(u)                                      (cellwise)
///
/// and is solved by the iteration
///
///   (h u~, phi) + tau (grad w, grad phi) = (u_prev, phi)
///   L_c u~_c |c| - int_c w = L_c u_c^{i-1} |c| - Phi_breve(u_c^{i-1}) |c|
///   u^i = max(u~, 0)
///
/// where the stabilisation factor L selects the scheme:
///   L-scheme: L constant
///   M-scheme: L_c = max{Phi_breve'(u_c^{i-1}) + M tau^gamma, 2 M tau^gamma}
///   Newton:   M-scheme with a tiny M (a true M = 0 path does not exist).
///
/// Because u~ is cellwise constant the second equation is diagonal, so u~ is
/// eliminated exactly and each iteration costs one SPD P1 solve for w.

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "mslab/field.hpp"
#include "mslab/model.hpp"
#include "mslab/problem.hpp"

namespace mslab {

struct LScheme {
  double L = 1.0;
  bool operator==(const LScheme&) const = default;
};

struct MScheme {
  double M = 1e-3;
  double gamma = 1.0;
  bool operator==(const MScheme&) const = default;
};

struct NewtonScheme {
  double m_reg = 1e-7;
  double gamma = 1.0;
  bool operator==(const NewtonScheme&) const = default;
};

struct SchemeConfig {
  std::variant<LScheme, MScheme, NewtonScheme> kind = MScheme{};
  double tol = 1e-5;
  int max_iter = 500;
  double divergence_threshold = 1e10;

  /// Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
  /// "L", "M" or "Newton".
  [[nodiscard]] std::string label() const;
  /// L for the L-scheme, M (or m_reg) otherwise.
  [[nodiscard]] double parameter() const;
  /// Exponent of tau in the M-scheme factor; 0 for the L-scheme.
  [[nodiscard]] double gamma() const;

  bool operator==(const SchemeConfig&) const = default;
};

enum class StepStatus { Converged, NonConvergence, Divergence };

const char* to_string(StepStatus status);

/// Stopping functional per iteration plus consecutive ratios.
struct IterationTrace {
  std::vector<double> errors;
  std::vector<double> contraction_estimates;
  int iterations = 0;
  bool converged = false;

  void record(double error);
};

/// Stabilisation factor per cell; strictly positive.
Field l_factor_field(const SchemeConfig& config, const RegularizedPhi& phi_breve,
                     const Field& u_prev_iter, double tau);

/// h_c = 1 - tau f(v_c) with v taken as the cell mean. Throws
/// std::invalid_argument if any h_c <= 0 (tau too large for the growth term).
Field growth_factor_field(const ModelSystem& model, const Field& v_prev, double tau);

struct LinearIterate {
  Field u_tilde;  // P0, before clipping
  Field w;        // P1
};

/// One linear solve of the coupled (u~, w) system.
LinearIterate linear_iteration(const FeProblem& problem, const Field& h_field,
                               const Field& u_prev_time, const Field& u_prev_iter,
                               const Field& l_field, const RegularizedPhi& phi_breve, double tau);

/// Cellwise positive part.
Field clip_positive(const Field& u_tilde);

/// int L |u_i - u_prev|^2 + tau ||grad(w_i - w_prev)||^2.
double stopping_error(const Field& u_i, const Field& u_prev, const Field& w_i,
                      const Field& w_prev, const Field& l_field, double tau);

struct StepResult {
  Field u;
  Field w;
  IterationTrace trace;
  StepStatus status = StepStatus::NonConvergence;
  std::string message;
};

/// Called after every iteration with the clipped u^i and w^i.
using IterationObserver = std::function<void(int iteration, const Field& u, const Field& w)>;

/// Iterates from u^0 = u_prev_time until the stopping functional drops below
/// tol (Converged), max_iter is hit (NonConvergence), or the functional
/// becomes non-finite / exceeds divergence_threshold or the linear solve
/// fails (Divergence). Failures are reported through `status`, not thrown.
///
/// `w_initial` is w^0, used only for the first stopping error.
StepResult solve_nonlinear_step(const FeProblem& problem, const ModelSystem& model,
                                const RegularizedPhi& phi_breve, const SchemeConfig& config,
                                const Field& u_prev_time, const Field& v_prev,
                                const Field& w_initial, double tau,
                                const IterationObserver& observer = {});

/// Defects of (u, w) in the time-discrete equations:
///   momentum:     l2 norm over free vertices of
///                 (h u, phi_j) + tau (grad w, grad phi_j) - (u_prev, phi_j)
///   constitutive: || mean_c(w) - Phi_breve(u_c) ||_{L2}
struct ConsistencyResidual {
  double momentum = 0.0;
  double constitutive = 0.0;
};

ConsistencyResidual consistency_residual(const FeProblem& problem, const Field& h_field,
                                         const Field& u_prev_time, const Field& u,
                                         const Field& w, const RegularizedPhi& phi_breve,
                                         double tau);

}  // namespace mslab
