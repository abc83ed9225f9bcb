// mslab: run a single simulation or one of the studies from a config file.
//
//   mslab run --config pme.cfg --set tau=0.005 --out out/
//   mslab convergence --config pme.cfg --set taus=10^-1,10^-1.5,10^-2
//   mslab contraction --config pme.cfg
//   mslab sweep --config biofilm.cfg --workers 4

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "mslab/config.hpp"
#include "mslab/field_io.hpp"
#include "mslab/study.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
  int workers = 1;
  bool plot = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

mslab::RunConfig load(const Options& opt, mslab::StudyType study) {
  const std::string text = opt.config_path.empty() ? std::string{} : read_file(opt.config_path);
  std::vector<std::string> overrides = opt.overrides;
  overrides.insert(overrides.begin(), std::string("study=") + mslab::to_string(study));
  return mslab::parse_config(text, overrides);
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json metadata_base(const std::string& subcommand, const mslab::RunConfig& config,
                   const Options& opt) {
  json meta;
  meta["subcommand"] = subcommand;
  meta["run_id"] = config.run_id;
  meta["config_file"] = opt.config_path;
  meta["overrides"] = opt.overrides;
  meta["workers"] = opt.workers;
  meta["config"] = mslab::to_config_text(config);
  return meta;
}

json summary_json(const mslab::RunSummary& r) {
  return {{"run_id", r.run_id},
          {"scheme", r.scheme},
          {"parameter", r.parameter},
          {"gamma", r.gamma},
          {"tau", r.tau},
          {"h", r.h},
          {"avg_iterations", r.avg_iterations},
          {"failed_steps", r.failed_steps},
          {"steps", r.steps},
          {"aborted", r.aborted},
          {"u_breve", number(r.u_breve)},
          {"max_u", r.max_u},
          {"wall_time_seconds", r.wall_time_seconds},
          {"error", r.error}};
}

void write_metadata(const fs::path& dir, const json& meta) {
  open_out(dir / "metadata.json") << meta.dump(2) << "\n";
}

std::string time_tag(int step) {
  std::ostringstream ss;
  ss << "n" << std::setw(5) << std::setfill('0') << step;
  return ss.str();
}

void write_plot_script(const fs::path& dir, const std::string& kind) {
  std::ofstream out = open_out(dir / "plot.py");
  out << "# Generated by mslab. Usage: python plot.py\n"
         "import pathlib\n"
         "import pandas as pd\n"
         "import matplotlib.pyplot as plt\n\n"
         "here = pathlib.Path(__file__).parent\n";
  if (kind == "run") {
    out << "for path in sorted(here.glob('u_*.csv')):\n"
           "    df = pd.read_csv(path)\n"
           "    if 'y' in df.columns:\n"
           "        continue\n"
           "    plt.plot(df['x'], df['value'], label=path.stem)\n"
           "plt.xlabel('x')\nplt.ylabel('u')\nplt.legend()\n"
           "plt.savefig(here / 'u.png', dpi=150)\n";
  } else if (kind == "convergence" || kind == "contraction") {
    const std::string col = kind == "convergence" ? "error" : "rate";
    out << "df = pd.read_csv(here / '" << kind << ".csv')\n"
        << "plt.loglog(df['tau'], df['" << col << "'], 'o-')\n"
        << "plt.xlabel('tau')\nplt.ylabel('" << col << "')\n"
        << "plt.savefig(here / '" << kind << ".png', dpi=150)\n";
  } else {
    out << "df = pd.read_csv(here / 'sweep.csv')\n"
           "for (scheme, param, tau), g in df.groupby(['scheme', 'param', 'tau']):\n"
           "    plt.semilogx(g['h'], g['avg_iterations'], 'o-', label=f'{scheme} {param:g} tau={tau:.3g}')\n"
           "plt.xlabel('h')\nplt.ylabel('average iterations')\nplt.legend(fontsize='small')\n"
           "plt.savefig(here / 'sweep.png', dpi=150)\n";
  }
}

int cmd_run(const Options& opt) {
  mslab::RunConfig config = load(opt, mslab::StudyType::Single);
  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);

  mslab::RunSetup setup = mslab::build_setup(config);
  auto& times = setup.options.snapshot_times;
  if (std::none_of(times.begin(), times.end(),
                   [&](double t) { return std::abs(t - config.t_end) <= 0.5 * setup.grid.tau; }))
    times.push_back(config.t_end);
  const mslab::RunRecord record = mslab::execute(setup);

  for (const auto& snap : record.snapshots) {
    const std::string tag = time_tag(snap.step);
    mslab::write_csv(dir / ("u_" + tag + ".csv"), snap.u);
    mslab::write_csv(dir / ("w_" + tag + ".csv"), snap.w);
    mslab::write_csv(dir / ("v_" + tag + ".csv"), snap.v);
    if (config.dim == 2)
      mslab::write_vtk(dir / ("fields_" + tag + ".vtk"), setup.problem.mesh(),
                       {{"u", &snap.u}, {"w", &snap.w}, {"v", &snap.v}});
  }
  {
    auto out = open_out(dir / "trace.csv");
    mslab::write_trace_csv(out, record);
  }
  const mslab::RunSummary summary = mslab::summarize(record);
  {
    auto out = open_out(dir / "summary.csv");
    mslab::write_run_summary_csv(out, {summary});
  }

  json meta = metadata_base("run", config, opt);
  meta["u_breve"] = number(record.u_breve);
  meta["wall_time_seconds"] = record.wall_time_seconds;
  meta["tau_effective"] = record.tau;
  meta["tau_exceeds_disc"] = record.tau_exceeds_disc;
  json failed = json::array();
  for (const auto& s : record.steps)
    if (s.status != mslab::StepStatus::Converged)
      failed.push_back({{"step", s.step},
                        {"time", s.time},
                        {"status", mslab::to_string(s.status)},
                        {"iterations", s.trace.iterations},
                        {"message", s.message}});
  meta["failures"] = {{"failed_steps", record.failed_steps},
                      {"aborted", record.aborted},
                      {"steps", failed},
                      {"invariant_violations", record.invariant_violations}};
  json snaps = json::array();
  for (const auto& s : record.snapshots) snaps.push_back({{"step", s.step}, {"time", s.time}});
  meta["snapshots"] = snaps;
  meta["summary"] = summary_json(summary);
  write_metadata(dir, meta);
  if (opt.plot) write_plot_script(dir, "run");

  for (const auto& v : record.invariant_violations) std::cerr << "warning: " << v << "\n";
  if (record.aborted) {
    const auto& last = record.steps.back();
    std::cerr << "mslab: run aborted at step " << last.step << " (" << to_string(last.status)
              << ": " << last.message << ")\n";
    return 2;
  }
  std::cout << "run " << config.run_id << ": " << record.steps.size() << " steps, "
            << record.average_iterations << " iterations/step, u_breve = " << record.u_breve
            << "\n";
  return 0;
}

int cmd_study(const Options& opt, mslab::StudyType study) {
  mslab::RunConfig config = load(opt, study);
  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  const bool convergence = study == mslab::StudyType::TimeConvergence;
  const std::string name = convergence ? "convergence" : "contraction";

  const auto start = std::chrono::steady_clock::now();
  const mslab::StudyResult result = convergence
                                        ? mslab::time_convergence_study(config, opt.workers)
                                        : mslab::contraction_study(config, opt.workers);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  {
    auto out = open_out(dir / (name + ".csv"));
    if (convergence)
      mslab::write_convergence_csv(out, result);
    else
      mslab::write_contraction_csv(out, result);
  }
  if (!result.runs.empty()) {
    auto out = open_out(dir / "runs.csv");
    mslab::write_run_summary_csv(out, result.runs);
  }

  json meta = metadata_base(name, config, opt);
  meta["slope"] = number(result.slope);
  meta["intercept"] = number(result.intercept);
  meta["rows"] = result.rows.size();
  meta["wall_time_seconds"] = wall;
  json runs = json::array();
  for (const auto& r : result.runs) runs.push_back(summary_json(r));
  meta["runs"] = runs;
  meta["failures"] = result.failures;
  write_metadata(dir, meta);
  if (opt.plot) write_plot_script(dir, name);

  std::cout << name << ": " << result.rows.size() << " rows, slope = " << result.slope << "\n";
  if (result.failures > 0) {
    std::cerr << "mslab: " << result.failures << " run(s) failed; see metadata.json\n";
    return 2;
  }
  return 0;
}

int cmd_sweep(const Options& opt) {
  mslab::RunConfig config = load(opt, mslab::StudyType::Sweep);
  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);

  const auto start = std::chrono::steady_clock::now();
  const std::vector<mslab::SweepRow> rows = mslab::sweep_study(config, opt.workers);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  {
    auto out = open_out(dir / "sweep.csv");
    mslab::write_sweep_csv(out, rows);
  }

  json meta = metadata_base("sweep", config, opt);
  meta["rows"] = rows.size();
  meta["wall_time_seconds"] = wall;
  int failed_points = 0;
  int errored_points = 0;
  json errors = json::array();
  for (const auto& r : rows) {
    if (r.failures != 0) ++failed_points;
    if (!r.error.empty()) {
      ++errored_points;
      errors.push_back({{"scheme", r.scheme}, {"tau", r.tau}, {"h", r.h}, {"error", r.error}});
    }
  }
  meta["failures"] = {{"points_with_failed_steps", failed_points},
                      {"points_with_errors", errored_points},
                      {"errors", errors}};
  write_metadata(dir, meta);
  if (opt.plot) write_plot_script(dir, "sweep");

  std::cout << "sweep: " << rows.size() << " points, " << failed_points
            << " with failed steps\n";
  return errored_points > 0 ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mslab: linearisation schemes for degenerate and singular diffusion"};
  app.require_subcommand(1);

  Options opt;
  const auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Config file (key = value lines)");
    sub->add_option("--set", opt.overrides, "Override a config key (key=value), repeatable")
        ->allow_extra_args(false);
    sub->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--workers", opt.workers, "Worker threads for studies")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_flag("--plot", opt.plot, "Also write a matplotlib plot script");
  };

  CLI::App* run = app.add_subcommand("run", "Single simulation");
  CLI::App* conv = app.add_subcommand("convergence", "Time-discretisation error over taus");
  CLI::App* contr = app.add_subcommand("contraction", "Contraction rate over taus");
  CLI::App* sweep = app.add_subcommand("sweep", "Average iterations over (scheme, tau, h)");
  for (CLI::App* sub : {run, conv, contr, sweep}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(opt);
    if (conv->parsed()) return cmd_study(opt, mslab::StudyType::TimeConvergence);
    if (contr->parsed()) return cmd_study(opt, mslab::StudyType::Contraction);
    return cmd_sweep(opt);
  } catch (const std::exception& e) {
    std::cerr << "mslab: error: " << e.what() << "\n";
    return 1;
  }
}
