#include "perturbdyn/workflows.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "perturbdyn/error.hpp"
#include "perturbdyn/logging.hpp"
#include "perturbdyn/random.hpp"

namespace perturbdyn {

namespace fs = std::filesystem;

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

Tolerances tolerances_from_json(const Json& parent, const char* key, const std::string& where) {
  Tolerances t;
  if (!parent.contains(key)) return t;
  const Json& j = parent.at(key);
  const std::string here = where + "." + key;
  check_keys(j, {"rtol", "atol"}, here);
  t.rtol = value_or<double>(j, "rtol", t.rtol, here);
  t.atol = value_or<double>(j, "atol", t.atol, here);
  if (!(t.rtol > 0.0) || !(t.atol > 0.0)) throw ConfigError(here + ": tolerances must be positive");
  return t;
}

Json to_json(const Tolerances& t) { return Json{{"rtol", t.rtol}, {"atol", t.atol}}; }

IntegrationOptions integration(const Tolerances& t) {
  IntegrationOptions o;
  o.rtol = t.rtol;
  o.atol = t.atol;
  return o;
}

std::vector<int> perturbation_list(const Json& cfg, const std::string& where) {
  if (!cfg.contains("perturbations")) return all_transmon_perturbations();
  auto list = value_or<std::vector<int>>(cfg, "perturbations", {}, where);
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i] < 0 || list[i] >= kTransmonPerturbations) {
      throw ConfigError(where + ".perturbations: index " + std::to_string(list[i]) +
                        " outside [0, " + std::to_string(kTransmonPerturbations) + ")");
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (list[k] == list[i]) throw ConfigError(where + ".perturbations: duplicate index");
    }
  }
  return list;
}

Expansion expansion_from_string(const std::string& s, const std::string& where) {
  if (s == "dyson") return Expansion::Dyson;
  if (s == "magnus") return Expansion::Magnus;
  throw ConfigError(where + ": expansion must be \"dyson\" or \"magnus\", got \"" + s + "\"");
}

const char* expansion_string(Expansion e) { return e == Expansion::Magnus ? "magnus" : "dyson"; }

std::string csv_preamble(const Json& resolved) {
  return "# perturbdyn " + library_version() + "\n# config: " + resolved.dump() + "\n";
}

std::string fmt_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

// ---------------------------------------------------------------- model files

Json resolve_include(const Json& entry, const fs::path& base, const std::string& where) {
  if (entry.is_string()) {
    const fs::path p = base / entry.get<std::string>();
    return read_json_file(p);
  }
  if (!entry.is_object()) throw ConfigError(where + ": expected an object or a file name");
  return entry;
}

TransmonParams transmon_params_from_json(const Json& j) {
  const std::string w = "model";
  check_keys(j, {"nu", "alpha", "beta", "r", "dim"}, w);
  TransmonParams p;
  p.nu = required<double>(j, "nu", w);
  p.alpha = required<double>(j, "alpha", w);
  p.beta = required<double>(j, "beta", w);
  p.r = required<double>(j, "r", w);
  p.dim = required<int>(j, "dim", w);
  p.validate();
  return p;
}

Json to_json(const TransmonParams& p) {
  return Json{{"nu", p.nu}, {"alpha", p.alpha}, {"beta", p.beta}, {"r", p.r}, {"dim", p.dim}};
}

ControlSettings control_settings_from_json(const Json& j) {
  const std::string w = "control";
  check_keys(j, {"basis_size", "coarse_samples", "coarse_dt", "fine_dt", "kernel_sigma",
                 "kernel_samples", "param_scale"},
             w);
  ControlSettings c;
  c.basis_size = required<int>(j, "basis_size", w);
  c.coarse_samples = required<int>(j, "coarse_samples", w);
  c.coarse_dt = required<double>(j, "coarse_dt", w);
  c.fine_dt = required<double>(j, "fine_dt", w);
  c.kernel.sigma = required<double>(j, "kernel_sigma", w);
  c.kernel.samples = required<int>(j, "kernel_samples", w);
  c.param_scale = value_or<double>(j, "param_scale", 1.0, w);
  if (c.basis_size < 1 || c.coarse_samples < 1) throw ConfigError(w + ": sizes must be >= 1");
  return c;
}

Json to_json(const ControlSettings& c) {
  return Json{{"basis_size", c.basis_size},     {"coarse_samples", c.coarse_samples},
              {"coarse_dt", c.coarse_dt},       {"fine_dt", c.fine_dt},
              {"kernel_sigma", c.kernel.sigma}, {"kernel_samples", c.kernel.samples},
              {"param_scale", c.param_scale}};
}

TwoTransmonParams two_transmon_params_from_json(const Json& j) {
  const std::string w = "model";
  check_keys(j, {"nu0", "nu1", "alpha0", "alpha1", "J", "dim"}, w);
  TwoTransmonParams p;
  p.nu0 = required<double>(j, "nu0", w);
  p.nu1 = required<double>(j, "nu1", w);
  p.alpha0 = required<double>(j, "alpha0", w);
  p.alpha1 = required<double>(j, "alpha1", w);
  p.J = required<double>(j, "J", w);
  p.dim = required<int>(j, "dim", w);
  p.validate();
  return p;
}

Json to_json(const TwoTransmonParams& p) {
  return Json{{"nu0", p.nu0},       {"nu1", p.nu1}, {"alpha0", p.alpha0},
              {"alpha1", p.alpha1}, {"J", p.J},     {"dim", p.dim}};
}

CxPulseParams cx_pulse_params_from_json(const Json& j) {
  const std::string w = "pulse";
  check_keys(j, {"T", "r", "sigma"}, w);
  CxPulseParams p;
  p.T = required<double>(j, "T", w);
  p.r = required<double>(j, "r", w);
  p.sigma = required<double>(j, "sigma", w);
  p.validate();
  return p;
}

Json to_json(const CxPulseParams& p) { return Json{{"T", p.T}, {"r", p.r}, {"sigma", p.sigma}}; }

TransmonDrive random_transmon_drive(const TransmonParams& model, const ControlSettings& control,
                                    std::uint64_t seed) {
  Xoshiro256 rng(seed);
  std::normal_distribution<double> normal(0.0, control.param_scale);
  TransmonDrive d;
  d.params.assign(2, std::vector<double>(static_cast<std::size_t>(control.basis_size)));
  for (auto& row : d.params) {
    for (double& v : row) v = normal(rng);
  }
  const auto basis = chebyshev_control_basis(control.basis_size, control.coarse_samples);
  d.envelope = smooth_envelope(d.params, basis, control.coarse_dt, control.fine_dt, control.kernel);
  d.signal.envelope = [env = d.envelope](double t) { return env(t); };
  d.signal.carrier_freq = model.nu;
  return d;
}

// ---------------------------------------------------------------- compute-terms

ComputeTermsSettings compute_terms_settings(const Json& cfg, const fs::path& base) {
  const std::string w = "config";
  check_keys(cfg, {"model", "control", "perturbations", "expansion", "order", "remove_frame",
                   "tolerances", "seed"},
             w);
  ComputeTermsSettings s;
  if (!cfg.contains("model")) throw ConfigError(w + ": missing required key \"model\"");
  if (!cfg.contains("control")) throw ConfigError(w + ": missing required key \"control\"");
  s.model = transmon_params_from_json(resolve_include(cfg.at("model"), base, "model"));
  s.control = control_settings_from_json(resolve_include(cfg.at("control"), base, "control"));
  s.perturbations = perturbation_list(cfg, w);
  s.expansion = expansion_from_string(value_or<std::string>(cfg, "expansion", "magnus", w), w);
  s.order = value_or<int>(cfg, "order", 1, w);
  if (s.order < 1) throw ConfigError(w + ".order must be >= 1");
  s.remove_frame = value_or<bool>(cfg, "remove_frame", false, w);
  s.tol = tolerances_from_json(cfg, "tolerances", w);
  s.seed = value_or<std::uint64_t>(cfg, "seed", 0, w);
  return s;
}

Json to_json(const ComputeTermsSettings& s) {
  return Json{{"model", to_json(s.model)},
              {"control", to_json(s.control)},
              {"perturbations", s.perturbations},
              {"expansion", expansion_string(s.expansion)},
              {"order", s.order},
              {"remove_frame", s.remove_frame},
              {"tolerances", to_json(s.tol)},
              {"seed", s.seed}};
}

PerturbationResult run_compute_terms(const ComputeTermsSettings& s) {
  const TransmonDrive drive = random_transmon_drive(s.model, s.control, s.seed);
  PerturbationProblem p =
      build_transmon_perturbation_problem(s.model, drive.signal, drive.duration(), s.perturbations);
  p.requested = all_multisets_up_to(s.perturbations, s.order);
  p.expansion = s.expansion;
  p.remove_frame = s.remove_frame;
  p.integration = integration(s.tol);
  p.integration.breakpoints = drive.envelope.edges();
  log_info("computing " + std::to_string(p.requested.size()) + " " + expansion_string(s.expansion) +
           " terms over [0, " + fmt_double(p.tf) + "]");
  return compute_perturbation_terms(p);
}

// ---------------------------------------------------------------- fidelity-scan

FidelityScanSettings fidelity_scan_settings(const Json& cfg, const fs::path& base) {
  const std::string w = "config";
  check_keys(cfg, {"model", "control", "axes", "points", "orders", "terms", "reference", "seed"}, w);
  FidelityScanSettings s;
  if (!cfg.contains("model")) throw ConfigError(w + ": missing required key \"model\"");
  if (!cfg.contains("control")) throw ConfigError(w + ": missing required key \"control\"");
  s.model = transmon_params_from_json(resolve_include(cfg.at("model"), base, "model"));
  s.control = control_settings_from_json(resolve_include(cfg.at("control"), base, "control"));
  s.axes = required<std::vector<int>>(cfg, "axes", w);
  for (int a : s.axes) {
    if (a < 0 || a >= kTransmonPerturbations) {
      throw ConfigError(w + ".axes: index " + std::to_string(a) + " out of range");
    }
  }
  s.points = required<std::vector<double>>(cfg, "points", w);
  s.orders = required<std::vector<int>>(cfg, "orders", w);
  if (s.axes.empty() || s.points.empty() || s.orders.empty()) {
    throw ConfigError(w + ": axes, points and orders must be non-empty");
  }
  for (int o : s.orders) {
    if (o < 1) throw ConfigError(w + ".orders: orders must be >= 1");
  }
  s.terms_tol = tolerances_from_json(cfg, "terms", w);
  s.reference_tol = tolerances_from_json(cfg, "reference", w);
  s.seed = value_or<std::uint64_t>(cfg, "seed", 0, w);
  return s;
}

Json to_json(const FidelityScanSettings& s) {
  return Json{{"model", to_json(s.model)},          {"control", to_json(s.control)},
              {"axes", s.axes},                     {"points", s.points},
              {"orders", s.orders},                 {"terms", to_json(s.terms_tol)},
              {"reference", to_json(s.reference_tol)}, {"seed", s.seed}};
}

FidelityScan run_fidelity_scan(const FidelityScanSettings& s) {
  const TransmonDrive drive = random_transmon_drive(s.model, s.control, s.seed);
  const double T = drive.duration();
  const int max_order = *std::max_element(s.orders.begin(), s.orders.end());

  PerturbationProblem p = build_transmon_perturbation_problem(s.model, drive.signal, T, s.axes);
  p.requested = all_multisets_up_to(s.axes, max_order);
  p.expansion = Expansion::Magnus;
  p.integration = integration(s.terms_tol);
  p.integration.breakpoints = drive.envelope.edges();
  const PerturbationResult magnus = compute_perturbation_terms(p);
  const ArrayPolynomial full = magnus.polynomial();
  std::vector<ArrayPolynomial> truncated;
  for (int o : s.orders) truncated.push_back(full.truncated(o));
  log_info("fidelity scan: " + std::to_string(magnus.labels.size()) + " Magnus terms");

  const Matrix target = pauli_x();
  FidelityScan out;
  out.orders = s.orders;
  out.n_terms = magnus.labels.size();
  for (int axis : s.axes) {
    for (double value : s.points) {
      std::vector<double> c(kTransmonPerturbations, 0.0);
      c[static_cast<std::size_t>(axis)] = value;
      OdeProblem ref;
      ref.t0 = 0.0;
      ref.tf = T;
      ref.y0 = identity(s.model.dim);
      const MatrixFunction gen = transmon_generator(s.model, drive.signal, c);
      ref.rhs = [&gen](double t, const Matrix& y, Matrix& dy) { dy.noalias() = gen(t) * y; };
      IntegrationOptions opts = integration(s.reference_tol);
      opts.breakpoints = drive.envelope.edges();
      const Matrix u_true = integrate(std::move(ref), opts).y_final;

      FidelityRow row;
      row.axis = axis;
      row.value = value;
      row.true_infidelity = infidelity(u_true, target);
      for (const auto& poly : truncated) {
        const double approx = infidelity(approx_unitary(magnus.frame_solution, poly, c), target);
        row.approx.push_back(approx);
        row.abs_error.push_back(std::abs(approx - row.true_infidelity));
      }
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

std::string fidelity_scan_csv(const FidelityScan& scan, const Json& resolved) {
  std::ostringstream out;
  out << csv_preamble(resolved);
  out << "axis,value,true_infidelity";
  for (int o : scan.orders) out << ",approx_order_" << o;
  for (int o : scan.orders) out << ",abs_error_order_" << o;
  out << '\n';
  for (const auto& r : scan.rows) {
    out << r.axis << ',' << fmt_double(r.value) << ',' << fmt_double(r.true_infidelity);
    for (double v : r.approx) out << ',' << fmt_double(v);
    for (double v : r.abs_error) out << ',' << fmt_double(v);
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------- solver-sweep

DrivenProblem make_rabi_problem(const RabiProblemSettings& s) {
  if (!(s.duration > 0.0)) throw ConfigError("rabi problem: duration must be positive");
  DrivenProblem p;
  p.model = build_rabi_model(s.model);
  Signal sig;
  const Complex amp = s.amplitude;
  const double T = s.duration;
  if (s.shape == "constant") {
    sig.envelope = [amp](double) { return amp; };
  } else if (s.shape == "gaussian") {
    const double width = T / 6.0;
    sig.envelope = [amp, T, width](double t) {
      const double z = (t - 0.5 * T) / width;
      return amp * std::exp(-0.5 * z * z);
    };
  } else {
    throw ConfigError("rabi problem: shape must be \"constant\" or \"gaussian\", got \"" + s.shape + "\"");
  }
  sig.carrier_freq = s.model.nu + s.detuning;
  p.signals = {sig};
  p.carrier_freqs = {s.model.nu};
  p.duration = T;
  return p;
}

DrivenProblem make_cx_problem(const CxProblemSettings& s) {
  DrivenProblem p;
  p.model = build_two_transmon_generator(s.model);
  const CxEnvelopes env = cx_envelopes(s.pulse, s.amp_sym, s.amp_asym, s.amp_ctrl);
  Signal control{env.control, s.model.nu1, 0.0};
  Signal target{env.target, s.model.nu1, 0.0};
  p.signals = {control, target};
  p.carrier_freqs = {s.model.nu1, s.model.nu1};
  p.duration = s.pulse.T;
  return p;
}

SweepSettings sweep_settings(const Json& cfg, const fs::path& base) {
  const std::string w = "config";
  check_keys(cfg, {"problem", "modes", "expansion_orders", "chebyshev_orders", "steps",
                   "reference", "precompute", "parallel", "seed"},
             w);
  SweepSettings s;
  if (!cfg.contains("problem")) throw ConfigError(w + ": missing required key \"problem\"");
  const Json& prob = cfg.at("problem");
  const std::string pw = "problem";
  s.problem_kind = required<std::string>(prob, "kind", pw);
  s.seed = value_or<std::uint64_t>(cfg, "seed", 0, w);
  if (s.problem_kind == "rabi") {
    check_keys(prob, {"kind", "model", "duration", "shape", "amplitude", "detuning"}, pw);
    const Json m = resolve_include(prob.at("model"), base, "problem.model");
    check_keys(m, {"nu", "r"}, "problem.model");
    s.rabi.model.nu = required<double>(m, "nu", "problem.model");
    s.rabi.model.r = required<double>(m, "r", "problem.model");
    s.rabi.duration = required<double>(prob, "duration", pw);
    s.rabi.shape = value_or<std::string>(prob, "shape", "constant", pw);
    s.rabi.amplitude = prob.contains("amplitude") ? complex_from_json(prob.at("amplitude")) : Complex{1.0};
    s.rabi.detuning = value_or<double>(prob, "detuning", 0.0, pw);
  } else if (s.problem_kind == "two_transmon") {
    check_keys(prob, {"kind", "model", "pulse", "amplitudes", "randomize_phases"}, pw);
    s.cx.model = two_transmon_params_from_json(resolve_include(prob.at("model"), base, "problem.model"));
    s.cx.pulse = cx_pulse_params_from_json(resolve_include(prob.at("pulse"), base, "problem.pulse"));
    const Json& a = prob.at("amplitudes");
    check_keys(a, {"sym", "asym", "ctrl"}, "problem.amplitudes");
    s.cx.amp_sym = complex_from_json(a.at("sym"));
    s.cx.amp_asym = complex_from_json(a.at("asym"));
    s.cx.amp_ctrl = complex_from_json(a.at("ctrl"));
    if (value_or<bool>(prob, "randomize_phases", false, pw)) {
      Xoshiro256 rng(s.seed);
      for (Complex* z : {&s.cx.amp_sym, &s.cx.amp_asym, &s.cx.amp_ctrl}) {
        *z = std::polar(std::abs(*z), 2.0 * std::numbers::pi * rng.uniform());
      }
    }
  } else {
    throw ConfigError(pw + ".kind must be \"rabi\" or \"two_transmon\", got \"" + s.problem_kind + "\"");
  }
  for (const auto& m : required<std::vector<std::string>>(cfg, "modes", w)) {
    s.modes.push_back(expansion_from_string(m, w + ".modes"));
  }
  s.expansion_orders = required<std::vector<int>>(cfg, "expansion_orders", w);
  s.chebyshev_orders = required<std::vector<int>>(cfg, "chebyshev_orders", w);
  s.steps = required<std::vector<int>>(cfg, "steps", w);
  for (int v : s.expansion_orders) {
    if (v < 1) throw ConfigError(w + ".expansion_orders: must be >= 1");
  }
  for (int v : s.chebyshev_orders) {
    if (v < 0) throw ConfigError(w + ".chebyshev_orders: must be >= 0");
  }
  for (int v : s.steps) {
    if (v < 1) throw ConfigError(w + ".steps: must be >= 1");
  }
  s.reference_tol = tolerances_from_json(cfg, "reference", w);
  s.precompute_tol = tolerances_from_json(cfg, "precompute", w);
  s.parallel = value_or<bool>(cfg, "parallel", false, w);
  return s;
}

Json to_json(const SweepSettings& s) {
  Json problem;
  if (s.problem_kind == "rabi") {
    problem = Json{{"kind", "rabi"},
                   {"model", Json{{"nu", s.rabi.model.nu}, {"r", s.rabi.model.r}}},
                   {"duration", s.rabi.duration},
                   {"shape", s.rabi.shape},
                   {"amplitude", complex_to_json(s.rabi.amplitude)},
                   {"detuning", s.rabi.detuning}};
  } else {
    problem = Json{{"kind", "two_transmon"},
                   {"model", to_json(s.cx.model)},
                   {"pulse", to_json(s.cx.pulse)},
                   {"amplitudes", Json{{"sym", complex_to_json(s.cx.amp_sym)},
                                       {"asym", complex_to_json(s.cx.amp_asym)},
                                       {"ctrl", complex_to_json(s.cx.amp_ctrl)}}}};
  }
  Json modes = Json::array();
  for (auto m : s.modes) modes.push_back(expansion_string(m));
  return Json{{"problem", problem},
              {"modes", modes},
              {"expansion_orders", s.expansion_orders},
              {"chebyshev_orders", s.chebyshev_orders},
              {"steps", s.steps},
              {"reference", to_json(s.reference_tol)},
              {"precompute", to_json(s.precompute_tol)},
              {"parallel", s.parallel},
              {"seed", s.seed}};
}

DrivenProblem make_sweep_problem(const SweepSettings& s) {
  return s.problem_kind == "rabi" ? make_rabi_problem(s.rabi) : make_cx_problem(s.cx);
}

PertSolverConfig solver_config(const DrivenProblem& problem, int expansion_order,
                               int chebyshev_order, int n_steps, const Tolerances& tol) {
  PertSolverConfig cfg;
  cfg.operators = problem.model.operators;
  cfg.frame_op = problem.model.frame_op;
  cfg.dt = problem.duration / n_steps;
  cfg.carrier_freqs = problem.carrier_freqs;
  cfg.chebyshev_orders.assign(problem.signals.size(), chebyshev_order);
  cfg.expansion_order = expansion_order;
  cfg.integration = integration(tol);
  return cfg;
}

Sweep run_solver_sweep(const SweepSettings& s) {
  const DrivenProblem problem = make_sweep_problem(s);
  const Eigen::Index d = problem.model.frame_op.rows();
  const Matrix y0 = identity(d);
  Sweep out;
  auto start = std::chrono::steady_clock::now();
  const Matrix reference = reference_solve(solver_config(problem, 1, 0, 1, s.reference_tol),
                                           problem.signals, problem.t0,
                                           problem.t0 + problem.duration, y0,
                                           s.reference_tol.rtol, s.reference_tol.atol);
  out.reference_wall_ms = elapsed_ms(start);
  SolveOptions opts;
  opts.parallel = s.parallel;
  for (Expansion mode : s.modes) {
    for (int order : s.expansion_orders) {
      for (int cheb : s.chebyshev_orders) {
        for (int steps : s.steps) {
          start = std::chrono::steady_clock::now();
          const auto cfg = solver_config(problem, order, cheb, steps, s.precompute_tol);
          const PrecomputedExpansion exp = precompute(cfg, mode);
          const Matrix u = solve(exp, problem.signals, problem.t0, steps, y0, opts);
          SweepRow row;
          row.mode = mode;
          row.expansion_order = order;
          row.chebyshev_order = cheb;
          row.n_steps = steps;
          row.n_terms = exp.labels.size();
          row.distance = distance(u, reference);
          row.wall_ms = elapsed_ms(start);
          log_info(std::string(expansion_string(mode)) + " order " + std::to_string(order) +
                   " cheb " + std::to_string(cheb) + " steps " + std::to_string(steps) +
                   ": distance " + fmt_double(row.distance));
          out.rows.push_back(row);
        }
      }
    }
  }
  return out;
}

std::string sweep_csv(const Sweep& sweep, const Json& resolved) {
  std::ostringstream out;
  out << csv_preamble(resolved);
  out << "# reference_wall_ms: " << fmt_double(sweep.reference_wall_ms) << '\n';
  out << "mode,expansion_order,chebyshev_order,n_steps,n_terms,distance,wall_ms\n";
  for (const auto& r : sweep.rows) {
    out << expansion_string(r.mode) << ',' << r.expansion_order << ',' << r.chebyshev_order << ','
        << r.n_steps << ',' << r.n_terms << ',' << fmt_double(r.distance) << ','
        << fmt_double(r.wall_ms) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------- robustness

RobustnessSettings robustness_settings(const Json& cfg, const fs::path& base) {
  const std::string w = "config";
  check_keys(cfg, {"model", "control", "perturbations", "order", "sigmas", "bound_sigmas",
                   "tolerances", "seed"},
             w);
  RobustnessSettings s;
  if (!cfg.contains("model")) throw ConfigError(w + ": missing required key \"model\"");
  if (!cfg.contains("control")) throw ConfigError(w + ": missing required key \"control\"");
  s.model = transmon_params_from_json(resolve_include(cfg.at("model"), base, "model"));
  s.control = control_settings_from_json(resolve_include(cfg.at("control"), base, "control"));
  s.perturbations = perturbation_list(cfg, w);
  s.order = value_or<int>(cfg, "order", 1, w);
  if (s.order < 1) throw ConfigError(w + ".order must be >= 1");
  s.sigmas = required<std::vector<double>>(cfg, "sigmas", w);
  if (s.sigmas.size() != s.perturbations.size()) {
    throw ConfigError(w + ".sigmas: need one value per perturbation (" +
                      std::to_string(s.perturbations.size()) + "), got " +
                      std::to_string(s.sigmas.size()));
  }
  s.bound_sigmas = value_or<double>(cfg, "bound_sigmas", 8.0, w);
  s.tol = tolerances_from_json(cfg, "tolerances", w);
  s.seed = value_or<std::uint64_t>(cfg, "seed", 0, w);
  return s;
}

Json to_json(const RobustnessSettings& s) {
  return Json{{"model", to_json(s.model)},
              {"control", to_json(s.control)},
              {"perturbations", s.perturbations},
              {"order", s.order},
              {"sigmas", s.sigmas},
              {"bound_sigmas", s.bound_sigmas},
              {"tolerances", to_json(s.tol)},
              {"seed", s.seed}};
}

std::vector<Moment> robustness_moments(const std::vector<int>& perturbations,
                                       const std::vector<double>& sigmas, double bound_sigmas,
                                       int order) {
  if (sigmas.size() != perturbations.size()) {
    throw ConfigError("robustness: one sigma per perturbation required");
  }
  int width = 0;
  for (int p : perturbations) width = std::max(width, p + 1);
  // Variables not in `perturbations` never appear in a label; their entries
  // are placeholders.
  std::vector<double> sig(static_cast<std::size_t>(width), 1.0);
  std::vector<double> bounds(static_cast<std::size_t>(width), 1.0);
  for (std::size_t i = 0; i < perturbations.size(); ++i) {
    sig[static_cast<std::size_t>(perturbations[i])] = sigmas[i];
    bounds[static_cast<std::size_t>(perturbations[i])] = bound_sigmas * sigmas[i];
  }
  std::vector<Multiset> labels;
  for (const auto& l : all_multisets_up_to(perturbations, 2 * order)) {
    if (even_multiplicities(l)) labels.push_back(l);
  }
  return gaussian_moments(labels, sig, bounds);
}

RobustnessRun run_robustness(const RobustnessSettings& s) {
  const TransmonDrive drive = random_transmon_drive(s.model, s.control, s.seed);
  PerturbationProblem p =
      build_transmon_perturbation_problem(s.model, drive.signal, drive.duration(), s.perturbations);
  p.requested = all_multisets_up_to(s.perturbations, s.order);
  p.expansion = Expansion::Magnus;
  p.integration = integration(s.tol);
  p.integration.breakpoints = drive.envelope.edges();
  RobustnessRun run;
  run.magnus = compute_perturbation_terms(p);
  run.moments = robustness_moments(s.perturbations, s.sigmas, s.bound_sigmas, s.order);
  run.objective = robustness_objective(run.magnus.polynomial(), projector_low(s.model.dim), run.moments);
  return run;
}

Json robustness_json(const RobustnessRun& run, const Json& resolved) {
  Json terms = Json::array();
  for (const auto& t : run.objective.terms) {
    terms.push_back(Json{{"label", multiset_to_json(t.label)},
                         {"h", t.h},
                         {"moment", t.moment},
                         {"contribution", t.h * t.moment}});
  }
  Json moments = Json::array();
  for (const auto& m : run.moments) {
    moments.push_back(Json{{"label", multiset_to_json(m.label)}, {"value", m.value}});
  }
  return Json{{"version", library_version()},
              {"config", resolved},
              {"g", run.objective.value},
              {"n_magnus_terms", run.magnus.labels.size()},
              {"terms", std::move(terms)},
              {"moments", std::move(moments)}};
}

}  // namespace perturbdyn
