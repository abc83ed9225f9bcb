#pragma once

/// @file config.hpp
/// @brief Run/study descriptions in a flat `key = value` format.
///
/// Lines are `key = value`; `#` starts a comment; list values are comma
/// separated. Numbers accept the usual floating forms and `10^x`.

#include <optional>
#include <string>
#include <vector>

#include "mslab/exact.hpp"
#include "mslab/field.hpp"
#include "mslab/mesh.hpp"
#include "mslab/model.hpp"
#include "mslab/problem.hpp"
#include "mslab/scheme.hpp"
#include "mslab/stepper.hpp"

namespace mslab {

enum class StudyType { Single, TimeConvergence, Contraction, Sweep };
enum class InitialCondition { Barenblatt, Hemispheres, Zero, Constant };

/// Reference: distance of (u^i, w^i) to a tightly converged (u*, w*) in the
/// contraction norm, i = 0..iterations.
/// Increment: square root of the stopping functional of iterations
/// 1..iterations+1, i.e. consecutive differences in the L-weighted norm.
enum class ContractionMetric { Reference, Increment };

const char* to_string(ContractionMetric metric);

const char* to_string(StudyType study);
const char* to_string(InitialCondition ic);

/// Thrown for malformed documents and failed validation; the message names the key.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  StudyType study = StudyType::Single;
  std::string run_id = "run";

  std::string model = "pme";
  PmeParameters pme;
  BiofilmParameters biofilm;

  int dim = 1;
  Interval interval{-1.0, 1.0};
  Rectangle rectangle{-1.0, 1.0, -1.0, 1.0};
  double h = 0.01;

  double t_start = 0.5;
  double t_end = 1.0;
  double tau = 0.01;
  /// Step sizes for convergence / contraction / sweep studies.
  std::vector<double> taus;
  /// Mesh sizes for sweeps.
  std::vector<double> hs;

  SchemeConfig scheme;
  /// Columns of a sweep; each shares tol/max_iter/gamma with `scheme`.
  std::vector<SchemeConfig> sweep_schemes;

  BoundarySpec boundary;

  InitialCondition ic = InitialCondition::Barenblatt;
  /// Barenblatt profile constant; when unset it is chosen so the initial
  /// support has radius `ic_support_radius`.
  std::optional<double> ic_C;
  double ic_support_radius = 0.6;
  Hemispheres hemispheres;
  double ic_value = 0.0;
  double v0 = 0.0;

  std::vector<double> snapshot_times;
  FailurePolicy on_failure = FailurePolicy::Abort;
  /// Tolerance of the reference solve in contraction measurements.
  double reference_tol = 1e-22;
  ContractionMetric contraction_metric = ContractionMetric::Reference;

  bool operator==(const RunConfig&) const = default;
};

/// Model-specific defaults (domain, time window, boundary conditions, IC,
/// scheme gamma). Throws ConfigError for an unknown model name.
RunConfig default_config(const std::string& model);

/// Parses a document and applies `overrides` ("key=value", later wins),
/// fills defaults and validates. Unknown keys are rejected.
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});

/// Throws ConfigError naming the offending key.
void validate(const RunConfig& config);

/// Full echo of every key relevant to the config; parse_config reproduces it.
std::string to_config_text(const RunConfig& config);

/// Parses "10^-1.5", "1e-3", "0.5". Throws ConfigError mentioning `key`.
double parse_number(const std::string& text, const std::string& key = "value");

ModelSystem build_model(const RunConfig& config);
Mesh build_config_mesh(const RunConfig& config, double h);
/// Barenblatt parameters of a PME config with C resolved.
BarenblattParams barenblatt_params(const RunConfig& config);

/// Everything needed for one call to run().
struct RunSetup {
  ModelSystem model;
  FeProblem problem;
  TimeGrid grid;
  SchemeConfig scheme;
  Field u0;
  Field v0;
  RunOptions options;
};

RunSetup build_setup(const RunConfig& config, double h, double tau_nominal,
                     const SchemeConfig& scheme);
RunSetup build_setup(const RunConfig& config);

/// Convenience: build_setup + run.
RunRecord execute(const RunSetup& setup);

}  // namespace mslab
