#pragma once

/// @file study.hpp
/// @brief Error metrics and the study harness: time convergence,
/// contraction rates and (h, tau, scheme) iteration sweeps.

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mslab/config.hpp"
#include "mslab/exact.hpp"
#include "mslab/stepper.hpp"

namespace mslab {

using SpaceTimeFunction = std::function<double(const Point&, double)>;

/// Analytic (u, w, v). An empty `v` drops the substrate term.
struct ExactSolution {
  SpaceTimeFunction u;
  SpaceTimeFunction w;
  SpaceTimeFunction v;
};

/// u = exact_modified_pme, w = Phi(u).
ExactSolution pme_exact_solution(const BarenblattParams& p, const Nonlinearity& phi);

/// sum_n int_{t_{n-1}}^{t_n} ||u_n - u(t)||^2 + ||w_n - w(t)||^2 (+ ||v_n - v(t)||^2)
/// with 2-point Gauss in time. Needs record.history for every step; throws
/// std::invalid_argument otherwise.
double spacetime_error(const RunRecord& record, const ExactSolution& exact);

struct OrderFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares fit of log(error) against log(control). Needs >= 2 pairs,
/// all strictly positive, and at least two distinct controls.
OrderFit fit_order(const std::vector<std::pair<double, double>>& pairs);

/// (e_3 / e_0)^(1/3) from the first four error values. Throws for fewer
/// values or a zero among e_0..e_2.
double contraction_rate(const std::vector<double>& errors);

/// Coefficient c of the gradient part in the contraction norm
///   |||(e_u, e_w)|||^2 = int h |e_u|^2 + c ||grad e_w||^2
/// c = 2 tau / (phi_m + M tau^gamma) for M-type schemes, 2 tau / (L + phi_m) for L.
double contraction_norm_weight(const SchemeConfig& scheme, double phi_m, double tau);

struct ContractionMeasurement {
  std::vector<double> errors;
  double rate = 0.0;
  int reference_iterations = 0;
};

/// Reference metric: solves one step to `reference_tol` to get (u*, w*),
/// then re-runs the scheme from the same start for `iterations` iterations
/// measuring the distance to the reference. Throws std::runtime_error if the
/// reference solve does not converge. The increment metric needs no reference.
ContractionMeasurement measure_contraction(const FeProblem& problem, const ModelSystem& model,
                                           const RegularizedPhi& phi_breve,
                                           const SchemeConfig& scheme, const Field& u_prev,
                                           const Field& v_prev, const Field& w_initial,
                                           double tau, double reference_tol, int iterations = 3,
                                           ContractionMetric metric = ContractionMetric::Reference);

/// Per-run line of the run summary table.
struct RunSummary {
  std::string run_id;
  std::string scheme;
  double parameter = 0.0;
  double gamma = 0.0;
  double tau = 0.0;
  double h = 0.0;
  double avg_iterations = 0.0;
  int failed_steps = 0;
  int steps = 0;
  bool aborted = false;
  double u_breve = 0.0;
  double max_u = 0.0;
  double wall_time_seconds = 0.0;
  std::string error;
};

RunSummary summarize(const RunRecord& record);

struct StudyRow {
  double control = 0.0;
  double value = 0.0;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<RunSummary> runs;
  /// Number of runs that failed or aborted.
  int failures = 0;
};

/// One run per tau in config.taus (with every step stored), error against
/// the exact PME solution. Requires model = pme.
StudyResult time_convergence_study(const RunConfig& config, int workers = 1);

/// Contraction rate of config.scheme on the first step from the initial
/// data, one row per tau in config.taus.
StudyResult contraction_study(const RunConfig& config, int workers = 1);

struct SweepRow {
  std::string scheme;
  double parameter = 0.0;
  double gamma = 0.0;
  double tau = 0.0;
  double h = 0.0;
  double avg_iterations = 0.0;
  int failures = 0;
  int steps = 0;
  double wall_time_seconds = 0.0;
  std::string error;
};

/// Every (scheme, tau, h) point of config.sweep_schemes (or config.scheme
/// if empty) x config.taus x config.hs, run with failures accepted and
/// flagged. Rows are in scheme-major, then tau, then h order whatever the
/// worker count. A point that throws is recorded with its error, not rethrown.
std::vector<SweepRow> sweep_study(const RunConfig& config, int workers = 1);

/// Runs job(i) for i in [0, n) on `workers` threads.
void parallel_for(int n, int workers, const std::function<void(int)>& job);

void write_convergence_csv(std::ostream& out, const StudyResult& result);
void write_contraction_csv(std::ostream& out, const StudyResult& result);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
/// run_id, time_step, iteration, error, converged
void write_trace_csv(std::ostream& out, const RunRecord& record);
/// run_id, scheme, M_or_L, gamma, tau, h, avg_iterations, failed_steps, wall_time_seconds
void write_run_summary_csv(std::ostream& out, const std::vector<RunSummary>& runs);

}  // namespace mslab
