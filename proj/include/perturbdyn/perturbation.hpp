#pragma once

#include <functional>
#include <vector>

#include "perturbdyn/array_polynomial.hpp"
#include "perturbdyn/linalg.hpp"
#include "perturbdyn/multiset.hpp"
#include "perturbdyn/ode.hpp"

namespace perturbdyn {

/// Time-dependent operator t -> G(t).
using MatrixFunction = std::function<Matrix(double t)>;

enum class Expansion { Dyson, Magnus };

/// One term c_I G_I(t) of the generator's power series.
struct PerturbationTerm {
  Multiset label;
  MatrixFunction op;
};

/// Power-series description of a generator G(t, c) = G_0(t) + sum_I c_I G_I(t)
/// together with the expansion terms to compute over [t0, tf].
struct PerturbationProblem {
  /// Unperturbed generator G_0; empty means identically zero.
  MatrixFunction frame_generator;
  /// Dimension d; needed when it cannot be inferred from a zero frame and no
  /// perturbations. Zero means infer.
  Eigen::Index dim = 0;
  std::vector<PerturbationTerm> perturbations;
  double t0 = 0.0;
  double tf = 0.0;
  std::vector<Multiset> requested;
  Expansion expansion = Expansion::Dyson;
  /// Return D_I = V(T)^-1 E_I rather than E_I. Ignored for Magnus, which
  /// always works from D_I.
  bool remove_frame = false;
  IntegrationOptions integration;
};

/// Frame solution V(T) and the expansion terms for the completed label list.
struct PerturbationResult {
  Matrix frame_solution;
  std::vector<Multiset> labels;
  std::vector<Matrix> terms;
  Expansion expansion = Expansion::Dyson;
  /// True when `terms` are D_I (or O_I) rather than E_I.
  bool frame_removed = false;
  long n_steps = 0;

  /// Index of `label` in `labels`, or -1.
  std::ptrdiff_t find(const Multiset& label) const;
  const Matrix& term(const Multiset& label) const;

  /// The terms as a polynomial without constant part.
  ArrayPolynomial polynomial() const;
};

/// Multivariable Dyson terms via a single coupled linear ODE for
/// (V, E_{I_1}, ..., E_{I_m}) over the completed label list.
PerturbationResult compute_dyson_terms(const PerturbationProblem& p);

/// Multivariable Magnus terms: Dyson terms with the frame removed, followed by
/// the Q-matrix recursion.
PerturbationResult compute_magnus_terms(const PerturbationProblem& p);

/// Dispatches on p.expansion.
PerturbationResult compute_perturbation_terms(const PerturbationProblem& p);

/// Magnus terms from Dyson terms D_I given over a complete, canonically
/// ordered label list.
std::vector<Matrix> magnus_from_dyson(const std::vector<Multiset>& labels,
                                      const std::vector<Matrix>& dyson_terms);

}  // namespace perturbdyn
