#pragma once

#include <functional>
#include <vector>

#include "perturbdyn/linalg.hpp"

namespace perturbdyn {

/// Complex envelope as a function of time (ns).
using Envelope = std::function<Complex(double t)>;

/// s(t) = Re[f(t) exp(i (2 pi nu t + phi))], with nu in GHz and t in ns.
struct Signal {
  Envelope envelope;
  double carrier_freq = 0.0;
  double phase = 0.0;

  double operator()(double t) const;
  /// f(t) exp(i (2 pi nu t + phi)) before taking the real part.
  Complex complex_value(double t) const;
};

double sample_signal(const Signal& s, double t);

/// Re-expresses `s` with carrier frequency `reference_freq` and zero phase;
/// the leftover oscillation moves into the envelope. Pointwise values are
/// unchanged.
Signal shift_carrier(const Signal& s, double reference_freq);

/// Samples held constant over windows of width dt starting at t_start; zero
/// outside [t_start, t_start + dt * samples.size()).
struct PiecewiseConstantEnvelope {
  double dt = 1.0;
  double t_start = 0.0;
  std::vector<Complex> samples;

  Complex operator()(double t) const;
  double t_end() const { return t_start + dt * static_cast<double>(samples.size()); }
  /// Sample boundaries, useful as integrator breakpoints.
  std::vector<double> edges() const;
};

/// Chebyshev expansion sum_m coeffs[m] T_m(x), x = 2 (t - t0) / width - 1.
struct ChebyshevCoefficients {
  double t0 = 0.0;
  double width = 1.0;
  std::vector<Complex> coeffs;

  Complex operator()(double t) const;
};

/// Discrete Chebyshev transform of `env` on [t0, t0 + width] from its values
/// at the order + 1 Chebyshev-Gauss nodes. The result interpolates env at
/// those nodes.
ChebyshevCoefficients chebyshev_fit(const Envelope& env, double t0, double width, int order);

/// T_0(x), ..., T_order(x) by the three-term recurrence.
std::vector<double> chebyshev_values(double x, int order);

}  // namespace perturbdyn
