#include "mslab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "mslab/field_io.hpp"

namespace mslab {

namespace {

const std::set<std::string>& common_keys() {
  static const std::set<std::string> keys{
      "study",         "run_id",          "model",        "dim",
      "domain",        "h",               "t_start",      "t_end",
      "tau",           "taus",            "hs",           "scheme",
      "M",             "L",               "m_reg",        "gamma",
      "tol",           "max_iter",        "divergence_threshold",
      "sweep_schemes", "bc_u",            "bc_v",         "bc_u_left",
      "bc_u_right",    "bc_u_bottom",     "bc_u_top",     "bc_v_left",
      "bc_v_right",    "bc_v_bottom",     "bc_v_top",     "ic",
      "ic_C",          "ic_support_radius", "ic_height",  "ic_radius",
      "ic_x1",         "ic_x2",           "ic_y",         "ic_value",
      "v0",            "snapshot_times",  "on_failure",   "reference_tol",
      "contraction_metric"};
  return keys;
}

const std::set<std::string>& pme_keys() {
  static const std::set<std::string> keys{"m", "beta_reaction"};
  return keys;
}

const std::set<std::string>& biofilm_keys() {
  static const std::set<std::string> keys{"k1", "k2", "k3", "k4", "d1",
                                          "d2", "alpha", "beta", "mu"};
  return keys;
}

const std::array<const char*, 4> kSideSuffix{"left", "right", "bottom", "top"};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

using KeyValues = std::map<std::string, std::string>;

void add_assignment(KeyValues& kv, const std::string& line, const std::string& where) {
  const auto eq = line.find('=');
  if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
  const std::string key = trim(line.substr(0, eq));
  if (key.empty()) throw ConfigError(where + ": empty key");
  kv[key] = trim(line.substr(eq + 1));
}

int parse_int(const std::string& text, const std::string& key) {
  const double x = parse_number(text, key);
  if (x != std::floor(x) || std::abs(x) > 1e9)
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return static_cast<int>(x);
}

std::vector<double> parse_numbers(const std::string& text, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_number(item, key));
  return out;
}

BoundaryCondition parse_bc(const std::string& text, const std::string& key) {
  const std::string t = lower(trim(text));
  if (t == "dirichlet") return DirichletZero{};
  if (t == "neumann") return NeumannZero{};
  if (t.rfind("dirichlet:", 0) == 0) {
    const double value = parse_number(t.substr(10), key);
    if (value == 0.0) return DirichletZero{};
    return DirichletValue{value};
  }
  throw ConfigError(key + ": expected dirichlet, dirichlet:<value> or neumann, got '" + text +
                    "'");
}

SchemeConfig parse_scheme_item(const std::string& text, const SchemeConfig& base, double gamma,
                               const std::string& key) {
  const auto colon = text.find(':');
  const std::string label = lower(trim(text.substr(0, colon)));
  std::optional<double> param;
  if (colon != std::string::npos) param = parse_number(text.substr(colon + 1), key);

  SchemeConfig out = base;
  if (label == "l") {
    if (!param) throw ConfigError(key + ": L-scheme entry needs a value, e.g. L:0.5");
    out.kind = LScheme{*param};
  } else if (label == "m") {
    out.kind = MScheme{param.value_or(MScheme{}.M), gamma};
  } else if (label == "newton") {
    out.kind = NewtonScheme{param.value_or(NewtonScheme{}.m_reg), gamma};
  } else {
    throw ConfigError(key + ": unknown scheme '" + text + "' (expected L, M or Newton)");
  }
  return out;
}

std::string scheme_item_text(const SchemeConfig& s) {
  return s.label() + ":" + format_double(s.parameter());
}

StudyType parse_study(const std::string& text) {
  const std::string t = lower(text);
  if (t == "single" || t == "run") return StudyType::Single;
  if (t == "time_convergence" || t == "convergence") return StudyType::TimeConvergence;
  if (t == "contraction") return StudyType::Contraction;
  if (t == "sweep") return StudyType::Sweep;
  throw ConfigError("study: unknown study '" + text + "'");
}

InitialCondition parse_ic(const std::string& text) {
  const std::string t = lower(text);
  if (t == "barenblatt") return InitialCondition::Barenblatt;
  if (t == "hemispheres") return InitialCondition::Hemispheres;
  if (t == "zero") return InitialCondition::Zero;
  if (t == "constant") return InitialCondition::Constant;
  throw ConfigError("ic: unknown initial condition '" + text + "'");
}

double default_gamma(const RunConfig& c) {
  if (c.model == "pme") return c.pme.m > 1.0 ? 1.0 / (c.pme.m - 1.0) : 1.0;
  return c.biofilm.alpha > 0.0 ? 1.0 / c.biofilm.alpha : 1.0;
}

double scheme_gamma(const RunConfig& c) {
  if (!std::holds_alternative<LScheme>(c.scheme.kind)) return c.scheme.gamma();
  for (const auto& s : c.sweep_schemes)
    if (!std::holds_alternative<LScheme>(s.kind)) return s.gamma();
  return default_gamma(c);
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += format_double(xs[i]);
  }
  return out;
}

void check_tau(const RunConfig& c, const ModelSystem& model, double tau, const std::string& key) {
  if (!(tau > 0.0)) throw ConfigError(key + ": step size must be > 0");
  const double snapped = TimeGrid::uniform(c.t_start, c.t_end, tau).tau;
  if (model.f_M > 0.0 && snapped * model.f_M >= 1.0) {
    std::ostringstream msg;
    msg << key << ": tau = " << snapped << " violates tau < 1/f_M = " << 1.0 / model.f_M
        << " (tau_disc = min(1/f_M, 1/g_M) = " << model.tau_disc() << ")";
    throw ConfigError(msg.str());
  }
}

}  // namespace

const char* to_string(StudyType study) {
  switch (study) {
    case StudyType::Single:
      return "single";
    case StudyType::TimeConvergence:
      return "time_convergence";
    case StudyType::Contraction:
      return "contraction";
    case StudyType::Sweep:
      return "sweep";
  }
  return "single";
}

const char* to_string(InitialCondition ic) {
  switch (ic) {
    case InitialCondition::Barenblatt:
      return "barenblatt";
    case InitialCondition::Hemispheres:
      return "hemispheres";
    case InitialCondition::Zero:
      return "zero";
    case InitialCondition::Constant:
      return "constant";
  }
  return "zero";
}

double parse_number(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError(key + ": expected a number, got ''");
  if (t.rfind("10^", 0) == 0) return std::pow(10.0, parse_number(t.substr(3), key));
  char* end = nullptr;
  const double x = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(x))
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  return x;
}

RunConfig default_config(const std::string& model) {
  RunConfig c;
  c.model = model;
  if (model == "pme") {
    c.t_start = 0.5;
    c.t_end = 1.0;
    c.scheme.kind = MScheme{1e-3, 1.0 / (c.pme.m - 1.0)};
    c.boundary = BoundarySpec::all(DirichletZero{}, NeumannZero{});
    c.ic = InitialCondition::Barenblatt;
    c.v0 = 0.0;
  } else if (model == "biofilm") {
    c.t_start = 0.0;
    c.t_end = 1.2;
    c.scheme.kind = MScheme{1e-2, 1.0 / c.biofilm.alpha};
    c.boundary = BoundarySpec::all(NeumannZero{}, NeumannZero{});
    c.boundary.v[side_index(Side::Left)] = DirichletValue{1.0};
    c.ic = InitialCondition::Hemispheres;
    c.v0 = 1.0;
  } else {
    throw ConfigError("model: unknown model '" + model + "' (expected pme or biofilm)");
  }
  return c;
}

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  KeyValues kv;
  {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      if (trim(line).empty()) continue;
      add_assignment(kv, line, "line " + std::to_string(line_no));
    }
  }
  for (const auto& o : overrides) add_assignment(kv, o, "override '" + o + "'");

  const std::string model = kv.count("model") ? lower(kv.at("model")) : "pme";
  RunConfig c = default_config(model);
  const auto& own = model == "pme" ? pme_keys() : biofilm_keys();
  for (const auto& [key, value] : kv) {
    if (common_keys().count(key) || own.count(key)) continue;
    if (pme_keys().count(key) || biofilm_keys().count(key))
      throw ConfigError(key + ": key does not apply to model " + model);
    throw ConfigError(key + ": unknown key");
  }

  const auto get = [&kv](const std::string& key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  const auto num = [&](const std::string& key, double& target) {
    if (auto v = get(key)) target = parse_number(*v, key);
  };

  if (auto v = get("study")) c.study = parse_study(*v);
  if (auto v = get("run_id")) c.run_id = *v;

  if (model == "pme") {
    num("m", c.pme.m);
    num("beta_reaction", c.pme.beta_reaction);
  } else {
    num("k1", c.biofilm.k1);
    num("k2", c.biofilm.k2);
    num("k3", c.biofilm.k3);
    num("k4", c.biofilm.k4);
    num("d1", c.biofilm.d1);
    num("d2", c.biofilm.d2);
    num("alpha", c.biofilm.alpha);
    num("beta", c.biofilm.beta);
    if (auto v = get("mu")) c.biofilm.mu = parse_int(*v, "mu");
  }

  if (auto v = get("dim")) c.dim = parse_int(*v, "dim");
  if (auto v = get("domain")) {
    const auto xs = parse_numbers(*v, "domain");
    if (c.dim == 1 && xs.size() == 2) {
      c.interval = {xs[0], xs[1]};
    } else if (c.dim == 2 && xs.size() == 4) {
      c.rectangle = {xs[0], xs[1], xs[2], xs[3]};
    } else {
      throw ConfigError("domain: expected a,b in 1D or x0,x1,y0,y1 in 2D");
    }
  }
  num("h", c.h);
  num("t_start", c.t_start);
  num("t_end", c.t_end);
  num("tau", c.tau);
  if (auto v = get("taus")) c.taus = parse_numbers(*v, "taus");
  if (auto v = get("hs")) c.hs = parse_numbers(*v, "hs");

  // Scheme: shared settings first, then the kind with its parameter.
  num("tol", c.scheme.tol);
  if (auto v = get("max_iter")) c.scheme.max_iter = parse_int(*v, "max_iter");
  num("divergence_threshold", c.scheme.divergence_threshold);
  double gamma = default_gamma(c);
  num("gamma", gamma);
  const std::string kind = lower(get("scheme").value_or("m"));
  if (kind == "l") {
    double L = 1.0;
    num("L", L);
    c.scheme.kind = LScheme{L};
  } else if (kind == "m") {
    double M = std::get<MScheme>(c.scheme.kind).M;
    num("M", M);
    c.scheme.kind = MScheme{M, gamma};
  } else if (kind == "newton") {
    double m_reg = NewtonScheme{}.m_reg;
    num("m_reg", m_reg);
    c.scheme.kind = NewtonScheme{m_reg, gamma};
  } else {
    throw ConfigError("scheme: unknown scheme '" + kind + "' (expected l, m or newton)");
  }
  if (auto v = get("sweep_schemes"))
    for (const auto& item : split_list(*v))
      c.sweep_schemes.push_back(parse_scheme_item(item, c.scheme, gamma, "sweep_schemes"));

  if (auto v = get("bc_u")) c.boundary.u.fill(parse_bc(*v, "bc_u"));
  if (auto v = get("bc_v")) c.boundary.v.fill(parse_bc(*v, "bc_v"));
  for (int s = 0; s < 4; ++s) {
    const std::string ku = std::string("bc_u_") + kSideSuffix[s];
    const std::string kv_ = std::string("bc_v_") + kSideSuffix[s];
    if (auto v = get(ku)) c.boundary.u[s] = parse_bc(*v, ku);
    if (auto v = get(kv_)) c.boundary.v[s] = parse_bc(*v, kv_);
  }

  if (auto v = get("ic")) c.ic = parse_ic(*v);
  if (auto v = get("ic_C")) c.ic_C = parse_number(*v, "ic_C");
  num("ic_support_radius", c.ic_support_radius);
  num("ic_height", c.hemispheres.height);
  num("ic_radius", c.hemispheres.radius);
  num("ic_x1", c.hemispheres.c1[0]);
  num("ic_x2", c.hemispheres.c2[0]);
  if (auto v = get("ic_y")) c.hemispheres.c1[1] = c.hemispheres.c2[1] = parse_number(*v, "ic_y");
  num("ic_value", c.ic_value);
  num("v0", c.v0);
  if (auto v = get("snapshot_times")) c.snapshot_times = parse_numbers(*v, "snapshot_times");
  if (auto v = get("on_failure")) {
    const std::string p = lower(*v);
    if (p == "abort") {
      c.on_failure = FailurePolicy::Abort;
    } else if (p == "continue" || p == "flag") {
      c.on_failure = FailurePolicy::AcceptAndFlag;
    } else {
      throw ConfigError("on_failure: expected abort or continue, got '" + *v + "'");
    }
  }
  num("reference_tol", c.reference_tol);
  if (auto v = get("contraction_metric")) {
    const std::string m = lower(*v);
    if (m == "reference") {
      c.contraction_metric = ContractionMetric::Reference;
    } else if (m == "increment") {
      c.contraction_metric = ContractionMetric::Increment;
    } else {
      throw ConfigError("contraction_metric: expected reference or increment, got '" + *v + "'");
    }
  }

  validate(c);
  return c;
}

void validate(const RunConfig& c) {
  ModelSystem model;
  try {
    model = build_model(c);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  if (c.model == "pme" && !(c.pme.m > 1.0)) throw ConfigError("m: exponent must be > 1");
  if (c.model == "biofilm") {
    if (c.biofilm.mu != 0 && c.biofilm.mu != 1) throw ConfigError("mu: must be 0 or 1");
    if (!(c.biofilm.k2 > 0.0)) throw ConfigError("k2: must be > 0");
    if (!(c.biofilm.d2 > 0.0)) throw ConfigError("d2: must be > 0");
  }
  if (c.dim != 1 && c.dim != 2) throw ConfigError("dim: must be 1 or 2");
  if (c.dim == 1 && !(c.interval.b > c.interval.a)) throw ConfigError("domain: need a < b");
  if (c.dim == 2 && !(c.rectangle.x1 > c.rectangle.x0 && c.rectangle.y1 > c.rectangle.y0))
    throw ConfigError("domain: need x0 < x1 and y0 < y1");
  if (!(c.h > 0.0)) throw ConfigError("h: mesh size must be > 0");
  for (double h : c.hs)
    if (!(h > 0.0)) throw ConfigError("hs: mesh sizes must be > 0");
  if (!(c.t_end > c.t_start)) throw ConfigError("t_end: must exceed t_start");
  check_tau(c, model, c.tau, "tau");
  for (double t : c.taus) check_tau(c, model, t, "taus");

  try {
    c.scheme.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  for (const auto& s : c.sweep_schemes) {
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("sweep_schemes: ") + e.what());
    }
  }
  try {
    c.boundary.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bc_u: ") + e.what());
  }

  if (c.ic == InitialCondition::Barenblatt) {
    if (c.model != "pme") throw ConfigError("ic: barenblatt requires model = pme");
    if (c.pme.beta_reaction == 0.0)
      throw ConfigError("ic: barenblatt initial data needs beta_reaction != 0");
    if (c.ic_C && !(*c.ic_C > 0.0)) throw ConfigError("ic_C: must be > 0");
    if (!(c.ic_support_radius > 0.0)) throw ConfigError("ic_support_radius: must be > 0");
  }
  if (c.ic == InitialCondition::Hemispheres &&
      !(c.hemispheres.radius > 0.0 && c.hemispheres.height >= 0.0))
    throw ConfigError("ic_radius: hemispheres need radius > 0 and height >= 0");
  if (c.ic == InitialCondition::Constant && c.ic_value < 0.0)
    throw ConfigError("ic_value: must be >= 0");
  if (model.phi.singular() && c.ic == InitialCondition::Hemispheres &&
      c.hemispheres.height >= model.phi.upper_bound())
    throw ConfigError("ic_height: initial density must stay below the maximum density");
  for (double t : c.snapshot_times)
    if (t < c.t_start || t > c.t_end)
      throw ConfigError("snapshot_times: times must lie in [t_start, t_end]");
  if (!(c.reference_tol > 0.0)) throw ConfigError("reference_tol: must be > 0");
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream out;
  const auto put = [&out](const std::string& key, const std::string& value) {
    out << key << " = " << value << "\n";
  };
  const auto putd = [&put](const std::string& key, double value) {
    put(key, format_double(value));
  };

  put("study", to_string(c.study));
  put("run_id", c.run_id);
  put("model", c.model);
  if (c.model == "pme") {
    putd("m", c.pme.m);
    putd("beta_reaction", c.pme.beta_reaction);
  } else {
    putd("k1", c.biofilm.k1);
    putd("k2", c.biofilm.k2);
    putd("k3", c.biofilm.k3);
    putd("k4", c.biofilm.k4);
    putd("d1", c.biofilm.d1);
    putd("d2", c.biofilm.d2);
    putd("alpha", c.biofilm.alpha);
    putd("beta", c.biofilm.beta);
    put("mu", std::to_string(c.biofilm.mu));
  }
  put("dim", std::to_string(c.dim));
  if (c.dim == 1) {
    put("domain", join({c.interval.a, c.interval.b}));
  } else {
    put("domain", join({c.rectangle.x0, c.rectangle.x1, c.rectangle.y0, c.rectangle.y1}));
  }
  putd("h", c.h);
  putd("t_start", c.t_start);
  putd("t_end", c.t_end);
  putd("tau", c.tau);
  put("taus", join(c.taus));
  put("hs", join(c.hs));

  put("scheme", lower(c.scheme.label()));
  if (std::holds_alternative<LScheme>(c.scheme.kind)) putd("L", c.scheme.parameter());
  if (std::holds_alternative<MScheme>(c.scheme.kind)) putd("M", c.scheme.parameter());
  if (std::holds_alternative<NewtonScheme>(c.scheme.kind)) putd("m_reg", c.scheme.parameter());
  putd("gamma", scheme_gamma(c));
  putd("tol", c.scheme.tol);
  put("max_iter", std::to_string(c.scheme.max_iter));
  putd("divergence_threshold", c.scheme.divergence_threshold);
  std::string schemes;
  for (std::size_t i = 0; i < c.sweep_schemes.size(); ++i) {
    if (i) schemes += ",";
    schemes += scheme_item_text(c.sweep_schemes[i]);
  }
  put("sweep_schemes", schemes);

  for (int s = 0; s < 4; ++s) {
    put(std::string("bc_u_") + kSideSuffix[s], to_string(c.boundary.u[s]));
    put(std::string("bc_v_") + kSideSuffix[s], to_string(c.boundary.v[s]));
  }

  put("ic", to_string(c.ic));
  if (c.ic_C) putd("ic_C", *c.ic_C);
  putd("ic_support_radius", c.ic_support_radius);
  putd("ic_height", c.hemispheres.height);
  putd("ic_radius", c.hemispheres.radius);
  putd("ic_x1", c.hemispheres.c1[0]);
  putd("ic_x2", c.hemispheres.c2[0]);
  putd("ic_y", c.hemispheres.c1[1]);
  putd("ic_value", c.ic_value);
  putd("v0", c.v0);
  put("snapshot_times", join(c.snapshot_times));
  put("on_failure", c.on_failure == FailurePolicy::Abort ? "abort" : "continue");
  putd("reference_tol", c.reference_tol);
  put("contraction_metric", to_string(c.contraction_metric));
  return out.str();
}

ModelSystem build_model(const RunConfig& c) {
  if (c.model == "pme") return make_pme(c.pme);
  if (c.model == "biofilm") return make_biofilm(c.biofilm);
  throw ConfigError("model: unknown model '" + c.model + "'");
}

Mesh build_config_mesh(const RunConfig& c, double h) {
  if (c.dim == 1) return build_mesh(c.interval, h);
  return build_mesh(c.rectangle, h);
}

BarenblattParams barenblatt_params(const RunConfig& c) {
  BarenblattParams p;
  p.m = c.pme.m;
  p.d = c.dim;
  p.beta = c.pme.beta_reaction;
  if (c.dim == 1) {
    p.center = {0.5 * (c.interval.a + c.interval.b), 0.0};
  } else {
    p.center = {0.5 * (c.rectangle.x0 + c.rectangle.x1), 0.5 * (c.rectangle.y0 + c.rectangle.y1)};
  }
  p.C = c.ic_C ? *c.ic_C : barenblatt_constant_for_radius(c.ic_support_radius, c.t_start, p);
  return p;
}

RunSetup build_setup(const RunConfig& c, double h, double tau_nominal,
                     const SchemeConfig& scheme) {
  FeProblem problem(build_config_mesh(c, h), c.boundary);
  const Mesh& mesh = problem.mesh();
  ModelSystem model = build_model(c);

  ScalarFunction ic;
  switch (c.ic) {
    case InitialCondition::Barenblatt: {
      const BarenblattParams p = barenblatt_params(c);
      const double t0 = c.t_start;
      ic = [p, t0](const Point& x) { return exact_modified_pme(x, t0, p); };
      break;
    }
    case InitialCondition::Hemispheres: {
      Hemispheres hp = c.hemispheres;
      if (c.dim == 1) hp.c1[1] = hp.c2[1] = 0.0;
      ic = [hp](const Point& x) { return hemispheres(x, hp); };
      break;
    }
    case InitialCondition::Zero:
      ic = [](const Point&) { return 0.0; };
      break;
    case InitialCondition::Constant: {
      const double value = c.ic_value;
      ic = [value](const Point&) { return value; };
      break;
    }
  }
  Field u0 = sample_p0(mesh, ic);

  Field v0 = model.mu == 1 ? Field::p1(mesh, c.v0) : Field::p0(mesh, c.v0);
  if (model.mu == 1) {
    const auto& constraint = problem.v_constraint();
    for (int i = 0; i < v0.size(); ++i)
      if (constraint.is_fixed(i)) v0[i] = constraint.value(i);
  }

  RunOptions options;
  options.run_id = c.run_id;
  options.snapshot_times = c.snapshot_times;
  options.on_failure = c.on_failure;
  options.config_snapshot = to_config_text(c);

  TimeGrid grid = TimeGrid::uniform(c.t_start, c.t_end, tau_nominal);
  return RunSetup{std::move(model), std::move(problem), grid,     scheme,
                  std::move(u0),    std::move(v0),      std::move(options)};
}

RunSetup build_setup(const RunConfig& c) { return build_setup(c, c.h, c.tau, c.scheme); }

RunRecord execute(const RunSetup& setup) {
  return run(setup.model, setup.problem, setup.grid, setup.scheme, setup.u0, setup.v0,
             setup.options);
}

}  // namespace mslab
