#include "mslab/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "mslab/field_io.hpp"

namespace mslab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double squared_distance(const Field& field, const SpaceTimeFunction& fn, double t) {
  const double d = l2_distance(field, [&fn, t](const Point& x) { return fn(x, t); });
  return d * d;
}

void fit_rows(StudyResult& result) {
  std::vector<std::pair<double, double>> pairs;
  for (const auto& row : result.rows)
    if (std::isfinite(row.value) && row.value > 0.0) pairs.emplace_back(row.control, row.value);
  if (pairs.size() < 2) {
    result.slope = result.intercept = kNaN;
    return;
  }
  const OrderFit fit = fit_order(pairs);
  result.slope = fit.slope;
  result.intercept = fit.intercept;
}

std::string suffix(const char* tag, int i) { return std::string("_") + tag + std::to_string(i); }

}  // namespace

ExactSolution pme_exact_solution(const BarenblattParams& p, const Nonlinearity& phi) {
  ExactSolution exact;
  exact.u = [p](const Point& x, double t) { return exact_modified_pme(x, t, p); };
  exact.w = [p, phi](const Point& x, double t) { return phi.value(exact_modified_pme(x, t, p)); };
  return exact;
}

double spacetime_error(const RunRecord& record, const ExactSolution& exact) {
  if (record.history.size() != record.steps.size() + 1 || record.history.size() < 2)
    throw std::invalid_argument("spacetime_error: the record must store every step");
  if (!exact.u || !exact.w) throw std::invalid_argument("spacetime_error: exact u and w required");

  const double g = 0.5 / std::sqrt(3.0);
  double total = 0.0;
  for (std::size_t n = 1; n < record.history.size(); ++n) {
    const Snapshot& s = record.history[n];
    const double t0 = record.history[n - 1].time;
    const double tau = s.time - t0;
    const double mid = t0 + 0.5 * tau;
    for (double tq : {mid - g * tau, mid + g * tau}) {
      double e = squared_distance(s.u, exact.u, tq) + squared_distance(s.w, exact.w, tq);
      if (exact.v) e += squared_distance(s.v, exact.v, tq);
      total += 0.5 * tau * e;
    }
  }
  return total;
}

OrderFit fit_order(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 2) throw std::invalid_argument("fit_order: need at least two pairs");
  double sx = 0.0, sy = 0.0;
  for (const auto& [c, e] : pairs) {
    if (!(c > 0.0) || !(e > 0.0))
      throw std::invalid_argument("fit_order: controls and errors must be > 0");
    sx += std::log(c);
    sy += std::log(e);
  }
  const double n = static_cast<double>(pairs.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [c, e] : pairs) {
    const double dx = std::log(c) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(e) - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_order: controls must not all coincide");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

double contraction_rate(const std::vector<double>& errors) {
  if (errors.size() < 4) throw std::invalid_argument("contraction_rate: need at least 4 errors");
  for (int i = 0; i < 3; ++i)
    if (errors[i] == 0.0) throw std::invalid_argument("contraction_rate: zero denominator");
  return std::cbrt(errors[3] / errors[0]);
}

double contraction_norm_weight(const SchemeConfig& scheme, double phi_m, double tau) {
  if (const auto* l = std::get_if<LScheme>(&scheme.kind)) return 2.0 * tau / (l->L + phi_m);
  return 2.0 * tau / (phi_m + scheme.parameter() * std::pow(tau, scheme.gamma()));
}

const char* to_string(ContractionMetric metric) {
  return metric == ContractionMetric::Reference ? "reference" : "increment";
}

ContractionMeasurement measure_contraction(const FeProblem& problem, const ModelSystem& model,
                                           const RegularizedPhi& phi_breve,
                                           const SchemeConfig& scheme, const Field& u_prev,
                                           const Field& v_prev, const Field& w_initial,
                                           double tau, double reference_tol, int iterations,
                                           ContractionMetric metric) {
  if (iterations < 1) throw std::invalid_argument("measure_contraction: iterations must be >= 1");
  if (metric == ContractionMetric::Increment) {
    SchemeConfig probe = scheme;
    probe.tol = 0.0;
    probe.max_iter = iterations + 1;
    probe.divergence_threshold = std::numeric_limits<double>::infinity();
    const StepResult r =
        solve_nonlinear_step(problem, model, phi_breve, probe, u_prev, v_prev, w_initial, tau);
    ContractionMeasurement out;
    for (double e : r.trace.errors) out.errors.push_back(std::sqrt(e));
    out.rate = out.errors.size() >= 4 ? contraction_rate(out.errors) : kNaN;
    return out;
  }
  SchemeConfig tight = scheme;
  tight.tol = reference_tol;
  tight.max_iter = std::max(scheme.max_iter, 20000);
  const StepResult reference =
      solve_nonlinear_step(problem, model, phi_breve, tight, u_prev, v_prev, w_initial, tau);
  if (reference.status != StepStatus::Converged)
    throw std::runtime_error("measure_contraction: reference solve did not converge (" +
                             std::string(to_string(reference.status)) + ", " +
                             reference.message + ")");

  const Field h_field = growth_factor_field(model, v_prev, tau);
  const double weight = contraction_norm_weight(scheme, model.phi.phi_m(), tau);
  const auto norm = [&](const Field& u, const Field& w) {
    const double eu = l2_norm(u - reference.u, h_field);
    return std::sqrt(eu * eu + weight * gradient_energy(w - reference.w));
  };

  ContractionMeasurement out;
  out.reference_iterations = reference.trace.iterations;
  out.errors.push_back(norm(u_prev, w_initial));

  SchemeConfig probe = scheme;
  probe.tol = 0.0;
  probe.max_iter = iterations;
  probe.divergence_threshold = std::numeric_limits<double>::infinity();
  solve_nonlinear_step(problem, model, phi_breve, probe, u_prev, v_prev, w_initial, tau,
                       [&](int, const Field& u, const Field& w) {
                         out.errors.push_back(norm(u, w));
                       });
  out.rate = out.errors.size() >= 4 ? contraction_rate(out.errors) : kNaN;
  return out;
}

RunSummary summarize(const RunRecord& record) {
  RunSummary s;
  s.run_id = record.run_id;
  s.scheme = record.scheme_label;
  s.parameter = record.scheme_parameter;
  s.gamma = record.gamma;
  s.tau = record.tau;
  s.h = record.h;
  s.avg_iterations = record.average_iterations;
  s.failed_steps = record.failed_steps;
  s.steps = static_cast<int>(record.steps.size());
  s.aborted = record.aborted;
  s.u_breve = record.u_breve;
  s.max_u = record.max_u;
  s.wall_time_seconds = record.wall_time_seconds;
  return s;
}

void parallel_for(int n, int workers, const std::function<void(int)>& job) {
  if (n <= 0) return;
  workers = std::clamp(workers, 1, n);
  if (workers == 1) {
    for (int i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int k = 0; k < workers; ++k) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          job(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

StudyResult time_convergence_study(const RunConfig& config, int workers) {
  if (config.model != "pme")
    throw std::invalid_argument("time_convergence_study: needs the pme model (exact solution)");
  if (config.taus.empty()) throw std::invalid_argument("time_convergence_study: taus is empty");

  const int n = static_cast<int>(config.taus.size());
  StudyResult result;
  result.rows.resize(n);
  result.runs.resize(n);
  const BarenblattParams params = barenblatt_params(config);

  parallel_for(n, workers, [&](int i) {
    RunSetup setup = build_setup(config, config.h, config.taus[i], config.scheme);
    setup.options.store_all_steps = true;
    setup.options.run_id = config.run_id + suffix("tau", i);
    const RunRecord record = execute(setup);
    result.runs[i] = summarize(record);
    result.rows[i].control = record.tau;
    result.rows[i].value =
        record.aborted ? kNaN
                       : spacetime_error(record, pme_exact_solution(params, setup.model.phi));
  });
  for (const auto& r : result.runs)
    if (r.aborted || r.failed_steps > 0) ++result.failures;
  fit_rows(result);
  return result;
}

StudyResult contraction_study(const RunConfig& config, int workers) {
  if (config.taus.empty()) throw std::invalid_argument("contraction_study: taus is empty");
  const int n = static_cast<int>(config.taus.size());
  StudyResult result;
  result.rows.resize(n);
  std::vector<std::string> errors(n);

  parallel_for(n, workers, [&](int i) {
    const RunSetup s = build_setup(config, config.h, config.taus[i], config.scheme);
    result.rows[i].control = s.grid.tau;
    try {
      const double u_breve = run_u_breve(s.model, s.problem, s.grid, s.u0);
      const RegularizedPhi phi_breve = run_regularization(s.model, u_breve);
      const Field w0 = initial_w(s.problem, phi_breve, s.u0);
      const ContractionMeasurement m =
          measure_contraction(s.problem, s.model, phi_breve, s.scheme, s.u0, s.v0, w0,
                              s.grid.tau, config.reference_tol, 3, config.contraction_metric);
      result.rows[i].value = m.rate;
    } catch (const std::exception& e) {
      result.rows[i].value = kNaN;
      errors[i] = e.what();
    }
  });
  for (int i = 0; i < n; ++i) {
    if (!errors[i].empty() || !std::isfinite(result.rows[i].value)) {
      ++result.failures;
      RunSummary failed;
      failed.run_id = config.run_id + suffix("tau", i);
      failed.tau = result.rows[i].control;
      failed.error = errors[i];
      result.runs.push_back(failed);
    }
  }
  fit_rows(result);
  return result;
}

std::vector<SweepRow> sweep_study(const RunConfig& config, int workers) {
  const std::vector<SchemeConfig> schemes =
      config.sweep_schemes.empty() ? std::vector<SchemeConfig>{config.scheme}
                                   : config.sweep_schemes;
  const std::vector<double> taus = config.taus.empty() ? std::vector<double>{config.tau}
                                                       : config.taus;
  const std::vector<double> hs = config.hs.empty() ? std::vector<double>{config.h} : config.hs;

  const int nh = static_cast<int>(hs.size());
  const int nt = static_cast<int>(taus.size());
  const int n = static_cast<int>(schemes.size()) * nt * nh;
  std::vector<SweepRow> rows(n);

  parallel_for(n, workers, [&](int idx) {
    const SchemeConfig& scheme = schemes[idx / (nt * nh)];
    const double tau = taus[(idx / nh) % nt];
    const double h = hs[idx % nh];
    SweepRow& row = rows[idx];
    row.scheme = scheme.label();
    row.parameter = scheme.parameter();
    row.gamma = scheme.gamma();
    row.h = h;
    row.tau = tau;
    try {
      RunSetup setup = build_setup(config, h, tau, scheme);
      setup.options.on_failure = FailurePolicy::AcceptAndFlag;
      setup.options.run_id = config.run_id + suffix("pt", idx);
      const RunRecord record = execute(setup);
      row.tau = record.tau;
      row.avg_iterations = record.average_iterations;
      row.failures = record.failed_steps;
      row.steps = static_cast<int>(record.steps.size());
      row.wall_time_seconds = record.wall_time_seconds;
    } catch (const std::exception& e) {
      row.error = e.what();
      row.failures = -1;
    }
  });
  return rows;
}

void write_convergence_csv(std::ostream& out, const StudyResult& result) {
  out << "tau,error\n";
  for (const auto& r : result.rows)
    out << format_double(r.control) << "," << format_double(r.value) << "\n";
}

void write_contraction_csv(std::ostream& out, const StudyResult& result) {
  out << "tau,rate\n";
  for (const auto& r : result.rows)
    out << format_double(r.control) << "," << format_double(r.value) << "\n";
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "scheme,param,tau,h,avg_iterations,failures\n";
  for (const auto& r : rows)
    out << r.scheme << "," << format_double(r.parameter) << "," << format_double(r.tau) << ","
        << format_double(r.h) << "," << format_double(r.avg_iterations) << "," << r.failures
        << "\n";
}

void write_trace_csv(std::ostream& out, const RunRecord& record) {
  out << "run_id,time_step,iteration,error,converged\n";
  for (const auto& step : record.steps) {
    for (std::size_t i = 0; i < step.trace.errors.size(); ++i) {
      const bool last = i + 1 == step.trace.errors.size();
      out << record.run_id << "," << step.step << "," << i + 1 << ","
          << format_double(step.trace.errors[i]) << ","
          << (last && step.trace.converged ? 1 : 0) << "\n";
    }
  }
}

void write_run_summary_csv(std::ostream& out, const std::vector<RunSummary>& runs) {
  out << "run_id,scheme,M_or_L,gamma,tau,h,avg_iterations,failed_steps,wall_time_seconds\n";
  for (const auto& r : runs)
    out << r.run_id << "," << r.scheme << "," << format_double(r.parameter) << ","
        << format_double(r.gamma) << "," << format_double(r.tau) << "," << format_double(r.h)
        << "," << format_double(r.avg_iterations) << "," << r.failed_steps << ","
        << format_double(r.wall_time_seconds) << "\n";
}

}  // namespace mslab
