#pragma once

#include <vector>

#include "perturbdyn/array_polynomial.hpp"
#include "perturbdyn/linalg.hpp"
#include "perturbdyn/perturbation.hpp"
#include "perturbdyn/pertsolver.hpp"
#include "perturbdyn/signal.hpp"

namespace perturbdyn {

/// Truncated number and lowering operators.
Matrix number_op(int dim);
Matrix lowering_op(int dim);
/// Projector onto levels 2, 3, ... (everything above the qubit subspace).
Matrix projector_high(int dim);
/// Projector onto levels 0 and 1.
Matrix projector_low(int dim);

struct TransmonParams {
  double nu = 0.0;     // GHz
  double alpha = 0.0;  // GHz
  double beta = 0.0;   // GHz
  double r = 0.0;      // GHz
  int dim = 2;

  void validate() const;
};

/// Number of model parameters the transmon exposes as perturbations.
inline constexpr int kTransmonPerturbations = 6;

/// Static (drive-free) part of the transmon Hamiltonian.
Matrix transmon_static_hamiltonian(const TransmonParams& p);

/// Generator -i H(t, c) with every model parameter perturbed:
/// c[0] frequency, c[1] anharmonicity, c[2] drive strength, c[3] s^2 drive
/// nonlinearity, c[4] higher-level spacing, c[5] higher-level drive.
MatrixFunction transmon_generator(const TransmonParams& p, const Signal& drive,
                                  std::vector<double> c);

/// Splits -i H(t, c) into -i H(t, 0) plus first-order terms labelled by
/// model index (0) .. (5). Only the indices in `perturbations` are included.
PerturbationProblem build_transmon_perturbation_problem(const TransmonParams& p,
                                                        const Signal& drive, double t_final,
                                                        const std::vector<int>& perturbations);

/// {0, 1, ..., 5}.
std::vector<int> all_transmon_perturbations();

/// Discretized Chebyshev polynomials T_0..T_{k-1} sampled at the centres of
/// n_samples windows covering [0, n_samples * width].
std::vector<std::vector<double>> chebyshev_control_basis(int k, int n_samples);

struct SmoothingKernel {
  double sigma = 0.5;  // ns
  int samples = 24;
};

/// Bounded, smoothed piecewise-constant envelope from unbounded parameters.
/// b holds two rows (real, imaginary) of k coefficients against `basis`
/// (k vectors on a grid of width coarse_dt). Samples pass through
/// arctan(x) / (pi / 2), are held at the finer rate fine_dt, and convolved
/// (full convolution) with a unit-sum Gaussian kernel.
PiecewiseConstantEnvelope smooth_envelope(const std::vector<std::vector<double>>& b,
                                          const std::vector<std::vector<double>>& basis,
                                          double coarse_dt, double fine_dt,
                                          const SmoothingKernel& kernel);

/// 1 - |Tr(target^dag u_2)|^2 / 4 with u_2 the top-left 2x2 block of u.
double infidelity(const Matrix& u, const Matrix& target);

/// Pauli X on two levels.
Matrix pauli_x();

/// v exp(magnus(c)).
Matrix approx_unitary(const Matrix& v, const ArrayPolynomial& magnus, std::span<const double> c);

struct CxPulseParams {
  double T = 200.0;    // ns
  double r = 7.0;      // rise window in units of sigma
  double sigma = 7.0;  // ns

  void validate() const;
};

/// Flat-top pulse with Gaussian edges, amplitude A, zero at 0 and T.
double cx_flat_top(double t, double A, const CxPulseParams& p);
/// Two half-length flat tops of opposite sign.
double cx_antisymmetric(double t, double A, const CxPulseParams& p);

struct CxEnvelopes {
  Envelope control;
  Envelope target;
};

/// Control drive amp_ctrl * f; target drive amp_sym * f + amp_asym * g.
CxEnvelopes cx_envelopes(const CxPulseParams& p, Complex amp_sym, Complex amp_asym,
                         Complex amp_ctrl);

struct TwoTransmonParams {
  double nu0 = 0.0;
  double nu1 = 0.0;
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double J = 0.0;
  int dim = 2;

  void validate() const;
};

/// Constant part F and drive operators A_j of G(t) = F + sum_j s_j(t) A_j.
struct DrivenModel {
  Matrix frame_op;
  std::vector<Matrix> operators;
};

/// Static generator F and drive operators A_0, A_1 on the product space
/// (transmon 0 is the slow index).
DrivenModel build_two_transmon_generator(const TwoTransmonParams& p);

/// Two-level Rabi model: F = -i 2 pi nu sz / 2, A = -i 2 pi r sx.
struct RabiParams {
  double nu = 5.0;
  double r = 0.1;
};

DrivenModel build_rabi_model(const RabiParams& p);

}  // namespace perturbdyn
