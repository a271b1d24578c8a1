#pragma once

#include <cstdint>
#include <vector>

#include "perturbdyn/linalg.hpp"
#include "perturbdyn/multiset.hpp"
#include "perturbdyn/ode.hpp"
#include "perturbdyn/perturbation.hpp"
#include "perturbdyn/signal.hpp"

namespace perturbdyn {

/// Fixed-step solver setup for G(t) = F + sum_j Re[f_j(t) e^{i 2 pi nu_j t}] A_j.
struct PertSolverConfig {
  std::vector<Matrix> operators;
  Matrix frame_op;
  double dt = 0.0;
  /// Reference carrier frequencies nu_j in GHz.
  std::vector<double> carrier_freqs;
  /// Highest Chebyshev degree per signal; 0 is a constant approximation.
  std::vector<int> chebyshev_orders;
  int expansion_order = 0;
  std::vector<Multiset> extra_labels;
  /// Empty means true for every signal.
  std::vector<bool> include_imag;
  IntegrationOptions integration;

  std::size_t n_signals() const noexcept { return operators.size(); }
  /// Throws ConfigError on inconsistent lengths or shapes.
  void validate() const;
  bool imag_included(std::size_t j) const {
    return include_imag.empty() || include_imag[j];
  }
};

enum class Part { Real, Imag };

/// Which envelope coefficient a series variable stands for.
struct VariableSlot {
  int signal = 0;
  int cheb_index = 0;
  Part part = Part::Real;
};

/// Variable layout for `cfg`: per signal, the real parts for m = 0..d_j-1,
/// then (if included) the imaginary parts.
std::vector<VariableSlot> variable_layout(const PertSolverConfig& cfg);

/// Completed label list the solver would store for `cfg`, without computing
/// any terms.
std::vector<Multiset> expansion_labels(const PertSolverConfig& cfg);

/// Expansion terms over one step [0, dt] in the frame of F.
///
/// Dyson: `terms` hold exp(dt F) D_I and `constant` holds exp(dt F), so one
/// step is the polynomial itself. Magnus: `terms` hold O_I, `constant` is
/// empty and the step is exp(poly) followed by `frame_step`.
struct PrecomputedExpansion {
  PertSolverConfig config;
  Expansion mode = Expansion::Dyson;
  std::vector<Multiset> labels;
  std::vector<Matrix> terms;
  Matrix constant;
  Matrix frame_step;
  std::vector<VariableSlot> variable_map;
  long precompute_steps = 0;

  Eigen::Index dim() const { return frame_step.rows(); }
  ArrayPolynomial polynomial() const;
};

/// The perturbation problem whose terms `precompute` stores, started at
/// `t_start` (basis functions re-centred there).
PerturbationProblem basis_problem(const PertSolverConfig& cfg, double t_start);

PrecomputedExpansion precompute(const PertSolverConfig& cfg, Expansion mode);

/// Series variables for the step [t0, t0 + dt]: Chebyshev coefficients of
/// each carrier-shifted envelope, rotated by e^{i omega_j t0}.
std::vector<double> step_coefficients(const PrecomputedExpansion& exp,
                                      const std::vector<Signal>& signals, double t0);

struct SolveOptions {
  /// Split the interval product across threads.
  bool parallel = false;
  unsigned threads = 0;
  /// Steps per reduction chunk; the chunking (hence the rounding) does not
  /// depend on the thread count.
  int chunk = 256;
};

/// Propagates y0 over n_steps steps from t0. Returns the state in the frame
/// of F: exp(-t_M F) U(t_M, t_0) exp(t_0 F) y0 where U is the lab propagator.
Matrix solve(const PrecomputedExpansion& exp, const std::vector<Signal>& signals, double t0,
             int n_steps, const Matrix& y0, const SolveOptions& opts = {});

/// Same result via the per-step conjugation exp(-t_k F) W_k exp(t_k F),
/// computing a frame exponential for every step.
Matrix solve_naive(const PrecomputedExpansion& exp, const std::vector<Signal>& signals,
                   double t0, int n_steps, const Matrix& y0);

/// Frobenius norm of D_I(t0, t0+dt) - exp(-t0 F) D_I(0, dt) exp(t0 F) (or the
/// Magnus analogue), recomputing the left side directly.
double verify_time_translation(const PertSolverConfig& cfg, Expansion mode,
                               const Multiset& label, double t0);

/// Lab-frame adaptive solve of G(t) = F + sum_j s_j(t) A_j, mapped into the
/// frame of F like `solve`.
Matrix reference_solve(const PertSolverConfig& cfg, const std::vector<Signal>& signals,
                       double t0, double tf, const Matrix& y0, double rtol, double atol);

}  // namespace perturbdyn
