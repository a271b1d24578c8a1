#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "perturbdyn/json_io.hpp"
#include "perturbdyn/models.hpp"
#include "perturbdyn/perturbation.hpp"
#include "perturbdyn/pertsolver.hpp"
#include "perturbdyn/robustness.hpp"

namespace perturbdyn {

/// Smooth random control for the single transmon.
struct ControlSettings {
  int basis_size = 0;
  int coarse_samples = 0;
  double coarse_dt = 0.0;
  double fine_dt = 0.0;
  SmoothingKernel kernel;
  /// Standard deviation of the random control parameters.
  double param_scale = 1.0;
};

struct TransmonDrive {
  std::vector<std::vector<double>> params;
  PiecewiseConstantEnvelope envelope;
  /// Envelope on a carrier at the transmon frequency.
  Signal signal;
  double duration() const { return envelope.t_end(); }
};

/// Draws the 2 x k control parameters from N(0, param_scale^2) with `seed`
/// and builds the drive.
TransmonDrive random_transmon_drive(const TransmonParams& model, const ControlSettings& control,
                                    std::uint64_t seed);

/// A `model` entry may be an inline object or a path relative to `base`.
Json resolve_include(const Json& entry, const std::filesystem::path& base, const std::string& where);

TransmonParams transmon_params_from_json(const Json& j);
Json to_json(const TransmonParams& p);
ControlSettings control_settings_from_json(const Json& j);
Json to_json(const ControlSettings& c);
TwoTransmonParams two_transmon_params_from_json(const Json& j);
Json to_json(const TwoTransmonParams& p);
CxPulseParams cx_pulse_params_from_json(const Json& j);
Json to_json(const CxPulseParams& p);

struct Tolerances {
  double rtol = 1e-12;
  double atol = 1e-12;
};

// ---------------------------------------------------------------- compute-terms

struct ComputeTermsSettings {
  TransmonParams model;
  ControlSettings control;
  std::vector<int> perturbations;
  Expansion expansion = Expansion::Magnus;
  int order = 1;
  bool remove_frame = false;
  Tolerances tol;
  std::uint64_t seed = 0;
};

ComputeTermsSettings compute_terms_settings(const Json& cfg, const std::filesystem::path& base);
Json to_json(const ComputeTermsSettings& s);
PerturbationResult run_compute_terms(const ComputeTermsSettings& s);

// ---------------------------------------------------------------- fidelity-scan

struct FidelityScanSettings {
  TransmonParams model;
  ControlSettings control;
  /// Perturbation indices scanned one at a time.
  std::vector<int> axes;
  std::vector<double> points;
  std::vector<int> orders;
  Tolerances terms_tol;
  Tolerances reference_tol;
  std::uint64_t seed = 0;
};

struct FidelityRow {
  int axis = 0;
  double value = 0.0;
  double true_infidelity = 0.0;
  std::vector<double> approx;
  std::vector<double> abs_error;
};

struct FidelityScan {
  std::vector<int> orders;
  std::size_t n_terms = 0;
  std::vector<FidelityRow> rows;
};

FidelityScanSettings fidelity_scan_settings(const Json& cfg, const std::filesystem::path& base);
Json to_json(const FidelityScanSettings& s);
FidelityScan run_fidelity_scan(const FidelityScanSettings& s);
std::string fidelity_scan_csv(const FidelityScan& scan, const Json& resolved);

// ---------------------------------------------------------------- solver-sweep

/// G(t) = F + sum_j s_j(t) A_j over [t0, t0 + duration].
struct DrivenProblem {
  DrivenModel model;
  std::vector<Signal> signals;
  std::vector<double> carrier_freqs;
  double t0 = 0.0;
  double duration = 0.0;
};

struct RabiProblemSettings {
  RabiParams model;
  double duration = 0.0;
  /// "constant" or "gaussian" (centred, width duration / 6).
  std::string shape = "constant";
  Complex amplitude{1.0, 0.0};
  /// Drive carrier offset from the model frequency (GHz).
  double detuning = 0.0;
};

DrivenProblem make_rabi_problem(const RabiProblemSettings& s);

struct CxProblemSettings {
  TwoTransmonParams model;
  CxPulseParams pulse;
  Complex amp_sym;
  Complex amp_asym;
  Complex amp_ctrl;
};

/// Both drives on a carrier at the target (transmon 1) frequency.
DrivenProblem make_cx_problem(const CxProblemSettings& s);

struct SweepSettings {
  std::string problem_kind;
  RabiProblemSettings rabi;
  CxProblemSettings cx;
  std::vector<Expansion> modes;
  std::vector<int> expansion_orders;
  std::vector<int> chebyshev_orders;
  std::vector<int> steps;
  Tolerances reference_tol;
  Tolerances precompute_tol;
  bool parallel = false;
  std::uint64_t seed = 0;
};

struct SweepRow {
  Expansion mode = Expansion::Dyson;
  int expansion_order = 0;
  int chebyshev_order = 0;
  int n_steps = 0;
  std::size_t n_terms = 0;
  double distance = 0.0;
  double wall_ms = 0.0;
};

struct Sweep {
  std::vector<SweepRow> rows;
  double reference_wall_ms = 0.0;
};

SweepSettings sweep_settings(const Json& cfg, const std::filesystem::path& base);
Json to_json(const SweepSettings& s);
DrivenProblem make_sweep_problem(const SweepSettings& s);
/// Solver config for `problem` with the same Chebyshev order on every signal.
PertSolverConfig solver_config(const DrivenProblem& problem, int expansion_order,
                               int chebyshev_order, int n_steps, const Tolerances& tol);
Sweep run_solver_sweep(const SweepSettings& s);
std::string sweep_csv(const Sweep& sweep, const Json& resolved);

// ---------------------------------------------------------------- robustness

struct RobustnessSettings {
  TransmonParams model;
  ControlSettings control;
  std::vector<int> perturbations;
  int order = 1;
  /// One standard deviation per entry of `perturbations`.
  std::vector<double> sigmas;
  /// Half-width of the integration box in units of sigma.
  double bound_sigmas = 8.0;
  Tolerances tol;
  std::uint64_t seed = 0;
};

struct RobustnessRun {
  PerturbationResult magnus;
  std::vector<Moment> moments;
  RobustnessResult objective;
};

RobustnessSettings robustness_settings(const Json& cfg, const std::filesystem::path& base);
Json to_json(const RobustnessSettings& s);
RobustnessRun run_robustness(const RobustnessSettings& s);
/// Moments for every even-multiplicity label up to 2 * order over the chosen
/// perturbation indices.
std::vector<Moment> robustness_moments(const std::vector<int>& perturbations,
                                       const std::vector<double>& sigmas, double bound_sigmas,
                                       int order);
Json robustness_json(const RobustnessRun& run, const Json& resolved);

}  // namespace perturbdyn
