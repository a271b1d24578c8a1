#include "perturbdyn/signal.hpp"

#include <cmath>
#include <numbers>

#include "perturbdyn/error.hpp"

namespace perturbdyn {

using std::numbers::pi;

Complex Signal::complex_value(double t) const {
  const Complex f = envelope ? envelope(t) : Complex{};
  return f * std::polar(1.0, 2.0 * pi * carrier_freq * t + phase);
}

double Signal::operator()(double t) const { return complex_value(t).real(); }

double sample_signal(const Signal& s, double t) { return s(t); }

Signal shift_carrier(const Signal& s, double reference_freq) {
  Signal out;
  out.carrier_freq = reference_freq;
  out.phase = 0.0;
  const double detuning = s.carrier_freq - reference_freq;
  const double phase = s.phase;
  out.envelope = [env = s.envelope, detuning, phase](double t) {
    const Complex f = env ? env(t) : Complex{};
    if (detuning == 0.0) return f * std::polar(1.0, phase);
    return f * std::polar(1.0, 2.0 * pi * detuning * t + phase);
  };
  return out;
}

Complex PiecewiseConstantEnvelope::operator()(double t) const {
  if (samples.empty() || t < t_start) return {};
  const double pos = (t - t_start) / dt;
  const auto idx = static_cast<std::size_t>(std::floor(pos));
  if (idx >= samples.size()) return {};
  return samples[idx];
}

std::vector<double> PiecewiseConstantEnvelope::edges() const {
  std::vector<double> out;
  out.reserve(samples.size() + 1);
  for (std::size_t k = 0; k <= samples.size(); ++k) {
    out.push_back(t_start + dt * static_cast<double>(k));
  }
  return out;
}

std::vector<double> chebyshev_values(double x, int order) {
  std::vector<double> t(static_cast<std::size_t>(order + 1));
  t[0] = 1.0;
  if (order >= 1) t[1] = x;
  for (int m = 2; m <= order; ++m) {
    t[static_cast<std::size_t>(m)] =
        2.0 * x * t[static_cast<std::size_t>(m - 1)] - t[static_cast<std::size_t>(m - 2)];
  }
  return t;
}

Complex ChebyshevCoefficients::operator()(double t) const {
  if (coeffs.empty()) return {};
  const double x = 2.0 * (t - t0) / width - 1.0;
  const auto basis = chebyshev_values(x, static_cast<int>(coeffs.size()) - 1);
  Complex acc{};
  for (std::size_t m = 0; m < coeffs.size(); ++m) acc += coeffs[m] * basis[m];
  return acc;
}

ChebyshevCoefficients chebyshev_fit(const Envelope& env, double t0, double width, int order) {
  if (!(width > 0.0)) throw ConfigError("chebyshev_fit requires a positive interval width");
  if (order < 0) throw ConfigError("chebyshev_fit requires order >= 0");
  const int n = order + 1;
  ChebyshevCoefficients out;
  out.t0 = t0;
  out.width = width;
  out.coeffs.assign(static_cast<std::size_t>(n), Complex{});
  for (int k = 0; k < n; ++k) {
    const double x = std::cos(pi * (k + 0.5) / n);
    const Complex f = env(t0 + 0.5 * (x + 1.0) * width);
    const auto basis = chebyshev_values(x, order);
    for (int m = 0; m < n; ++m) {
      out.coeffs[static_cast<std::size_t>(m)] += f * basis[static_cast<std::size_t>(m)];
    }
  }
  for (int m = 0; m < n; ++m) {
    out.coeffs[static_cast<std::size_t>(m)] *= (m == 0 ? 1.0 : 2.0) / n;
  }
  return out;
}

}  // namespace perturbdyn
