#include "perturbdyn/pertsolver.hpp"

#include <atomic>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <thread>

#include "perturbdyn/error.hpp"

namespace perturbdyn {

using std::numbers::pi;

void PertSolverConfig::validate() const {
  const std::size_t s = operators.size();
  if (carrier_freqs.size() != s || chebyshev_orders.size() != s) {
    throw ConfigError("solver config: operators, carrier_freqs and chebyshev_orders must have "
                      "equal length (got " + std::to_string(s) + ", " +
                      std::to_string(carrier_freqs.size()) + ", " +
                      std::to_string(chebyshev_orders.size()) + ")");
  }
  if (!include_imag.empty() && include_imag.size() != s) {
    throw ConfigError("solver config: include_imag needs one entry per signal");
  }
  if (!(dt > 0.0)) throw ConfigError("solver config: dt must be positive");
  if (expansion_order < 0) throw ConfigError("solver config: expansion_order must be >= 0");
  require_square(frame_op, "frame operator");
  for (const auto& a : operators) {
    if (a.rows() != frame_op.rows() || a.cols() != frame_op.cols()) {
      throw ConfigError("solver config: every operator must match the frame operator's shape");
    }
  }
  for (int o : chebyshev_orders) {
    if (o < 0) throw ConfigError("solver config: chebyshev orders must be >= 0");
  }
}

std::vector<VariableSlot> variable_layout(const PertSolverConfig& cfg) {
  std::vector<VariableSlot> out;
  for (std::size_t j = 0; j < cfg.n_signals(); ++j) {
    const int n = cfg.chebyshev_orders[j] + 1;
    for (int m = 0; m < n; ++m) out.push_back({static_cast<int>(j), m, Part::Real});
    if (cfg.imag_included(j)) {
      for (int m = 0; m < n; ++m) out.push_back({static_cast<int>(j), m, Part::Imag});
    }
  }
  return out;
}

std::vector<Multiset> expansion_labels(const PertSolverConfig& cfg) {
  const auto r = static_cast<int>(variable_layout(cfg).size());
  std::vector<Multiset> labels = all_multisets_up_to(r, cfg.expansion_order);
  for (const auto& l : cfg.extra_labels) {
    if (l.alphabet_size() > r) {
      throw ConfigError("extra label " + l.to_string() + " uses a variable beyond the " +
                        std::to_string(r) + " solver variables");
    }
    labels.push_back(l);
  }
  return complete(labels);
}

ArrayPolynomial PrecomputedExpansion::polynomial() const {
  std::optional<Matrix> c;
  if (constant.size() > 0) c = constant;
  return ArrayPolynomial(std::move(c), labels, terms);
}

namespace {

// exp(-tF) A_j exp(tF) for all j at one time, reused across the operator
// callbacks of a single right-hand-side evaluation.
class RotatedOperators {
 public:
  explicit RotatedOperators(const PertSolverConfig& cfg)
      : frame_(cfg.frame_op), ops_(cfg.operators), rotated_(cfg.operators.size()) {}

  const Matrix& at(double t, std::size_t j) {
    if (!valid_ || t != t_) {
      const Matrix fwd = expm(t * frame_);
      const Matrix back = expm(-t * frame_);
      for (std::size_t k = 0; k < ops_.size(); ++k) rotated_[k] = back * ops_[k] * fwd;
      t_ = t;
      valid_ = true;
    }
    return rotated_[j];
  }

 private:
  Matrix frame_;
  std::vector<Matrix> ops_;
  std::vector<Matrix> rotated_;
  double t_ = 0.0;
  bool valid_ = false;
};

std::vector<Signal> shifted_signals(const PrecomputedExpansion& exp,
                                    const std::vector<Signal>& signals) {
  if (signals.size() != exp.config.n_signals()) {
    throw ConfigError("solver expects " + std::to_string(exp.config.n_signals()) +
                      " signals, got " + std::to_string(signals.size()));
  }
  std::vector<Signal> out;
  out.reserve(signals.size());
  for (std::size_t j = 0; j < signals.size(); ++j) {
    out.push_back(shift_carrier(signals[j], exp.config.carrier_freqs[j]));
  }
  return out;
}

std::vector<double> coefficients_shifted(const PrecomputedExpansion& exp,
                                         const std::vector<Signal>& shifted, double t0) {
  const auto& cfg = exp.config;
  std::vector<std::vector<Complex>> rotated(shifted.size());
  for (std::size_t j = 0; j < shifted.size(); ++j) {
    const auto fit = chebyshev_fit(shifted[j].envelope, t0, cfg.dt, cfg.chebyshev_orders[j]);
    const Complex phase = std::polar(1.0, 2.0 * pi * cfg.carrier_freqs[j] * t0);
    rotated[j].reserve(fit.coeffs.size());
    for (const Complex& f : fit.coeffs) rotated[j].push_back(f * phase);
  }
  std::vector<double> c;
  c.reserve(exp.variable_map.size());
  for (const auto& slot : exp.variable_map) {
    const Complex v = rotated[static_cast<std::size_t>(slot.signal)]
                             [static_cast<std::size_t>(slot.cheb_index)];
    c.push_back(slot.part == Part::Real ? v.real() : v.imag());
  }
  return c;
}

// Lab-frame propagator of one step, exp(dt F) W_k.
Matrix step_propagator(const PrecomputedExpansion& exp, const ArrayPolynomial& poly,
                       std::span<const double> c) {
  if (exp.mode == Expansion::Dyson) return poly(c);
  return exp.frame_step * expm(poly(c));
}

}  // namespace

PerturbationProblem basis_problem(const PertSolverConfig& cfg, double t_start) {
  cfg.validate();
  const auto layout = variable_layout(cfg);
  auto rotated = std::make_shared<RotatedOperators>(cfg);
  PerturbationProblem p;
  p.dim = cfg.frame_op.rows();
  p.t0 = t_start;
  p.tf = t_start + cfg.dt;
  p.integration = cfg.integration;
  const double dt = cfg.dt;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const VariableSlot slot = layout[i];
    const auto j = static_cast<std::size_t>(slot.signal);
    const double omega = 2.0 * pi * cfg.carrier_freqs[j];
    PerturbationTerm term;
    term.label = Multiset{static_cast<int>(i)};
    term.op = [rotated, slot, j, omega, t_start, dt](double t) -> Matrix {
      const double tau = t - t_start;
      const double x = 2.0 * tau / dt - 1.0;
      const double cheb = chebyshev_values(x, slot.cheb_index)[static_cast<std::size_t>(slot.cheb_index)];
      const double carrier = slot.part == Part::Real ? std::cos(omega * tau) : std::sin(-omega * tau);
      return (carrier * cheb) * rotated->at(t, j);
    };
    p.perturbations.push_back(std::move(term));
  }
  return p;
}

PrecomputedExpansion precompute(const PertSolverConfig& cfg, Expansion mode) {
  PerturbationProblem p = basis_problem(cfg, 0.0);
  p.requested = expansion_labels(cfg);
  p.expansion = mode;
  p.remove_frame = true;
  PerturbationResult r = compute_perturbation_terms(p);

  PrecomputedExpansion out;
  out.config = cfg;
  out.mode = mode;
  out.labels = std::move(r.labels);
  out.variable_map = variable_layout(cfg);
  out.frame_step = expm(cfg.dt * cfg.frame_op);
  out.precompute_steps = r.n_steps;
  if (mode == Expansion::Dyson) {
    out.constant = out.frame_step;
    out.terms.reserve(r.terms.size());
    for (const auto& d : r.terms) out.terms.push_back(out.frame_step * d);
  } else {
    out.terms = std::move(r.terms);
  }
  return out;
}

std::vector<double> step_coefficients(const PrecomputedExpansion& exp,
                                      const std::vector<Signal>& signals, double t0) {
  return coefficients_shifted(exp, shifted_signals(exp, signals), t0);
}

Matrix solve(const PrecomputedExpansion& exp, const std::vector<Signal>& signals, double t0,
             int n_steps, const Matrix& y0, const SolveOptions& opts) {
  const Eigen::Index d = exp.dim();
  if (y0.rows() != d) {
    throw ShapeError("solve: y0 has " + std::to_string(y0.rows()) + " rows, expected " +
                     std::to_string(d));
  }
  if (n_steps < 0) throw ConfigError("solve: n_steps must be >= 0");
  const auto shifted = shifted_signals(exp, signals);
  const ArrayPolynomial poly = exp.polynomial();
  const double dt = exp.config.dt;

  auto chunk_product = [&](int first, int last) {
    Matrix acc = Matrix::Identity(d, d);
    for (int k = first; k < last; ++k) {
      const double tk = t0 + k * dt;
      const auto c = coefficients_shifted(exp, shifted, tk);
      acc = step_propagator(exp, poly, c) * acc;
    }
    return acc;
  };

  Matrix product;
  if (!opts.parallel) {
    product = chunk_product(0, n_steps);
  } else {
    const int chunk = std::max(1, opts.chunk);
    const int n_chunks = (n_steps + chunk - 1) / chunk;
    std::vector<Matrix> partial(static_cast<std::size_t>(n_chunks));
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int i = next++; i < n_chunks; i = next++) {
        partial[static_cast<std::size_t>(i)] =
            chunk_product(i * chunk, std::min(n_steps, (i + 1) * chunk));
      }
    };
    unsigned n_threads = opts.threads ? opts.threads : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(n_chunks)));
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    pool.clear();
    product = Matrix::Identity(d, d);
    for (const auto& m : partial) product = m * product;
  }
  if (!all_finite(product)) {
    throw DivergenceError("perturbative solve produced non-finite values", t0 + n_steps * dt);
  }
  const double tf = t0 + n_steps * dt;
  return expm(-tf * exp.config.frame_op) * product * expm(t0 * exp.config.frame_op) * y0;
}

Matrix solve_naive(const PrecomputedExpansion& exp, const std::vector<Signal>& signals,
                   double t0, int n_steps, const Matrix& y0) {
  const Eigen::Index d = exp.dim();
  if (y0.rows() != d) throw ShapeError("solve_naive: y0 row count does not match");
  const auto shifted = shifted_signals(exp, signals);
  const ArrayPolynomial poly = exp.polynomial();
  const double dt = exp.config.dt;
  const Matrix& f = exp.config.frame_op;
  const Matrix unfold = expm(-dt * f);
  Matrix acc = Matrix::Identity(d, d);
  for (int k = 0; k < n_steps; ++k) {
    const double tk = t0 + k * dt;
    const auto c = coefficients_shifted(exp, shifted, tk);
    const Matrix w = exp.mode == Expansion::Dyson ? Matrix(unfold * poly(c)) : expm(poly(c));
    acc = expm(-tk * f) * w * expm(tk * f) * acc;
  }
  if (!all_finite(acc)) {
    throw DivergenceError("naive perturbative solve produced non-finite values", t0 + n_steps * dt);
  }
  return acc * y0;
}

double verify_time_translation(const PertSolverConfig& cfg, Expansion mode,
                               const Multiset& label, double t0) {
  auto term_at = [&](double start) {
    PerturbationProblem p = basis_problem(cfg, start);
    p.requested = {label};
    p.expansion = mode;
    p.remove_frame = true;
    return compute_perturbation_terms(p).term(label);
  };
  const Matrix base = term_at(0.0);
  if (t0 == 0.0) return 0.0;
  const Matrix direct = term_at(t0);
  const Matrix translated = expm(-t0 * cfg.frame_op) * base * expm(t0 * cfg.frame_op);
  return frobenius_norm(direct - translated);
}

Matrix reference_solve(const PertSolverConfig& cfg, const std::vector<Signal>& signals,
                       double t0, double tf, const Matrix& y0, double rtol, double atol) {
  cfg.validate();
  if (signals.size() != cfg.n_signals()) {
    throw ConfigError("reference_solve: one signal per operator required");
  }
  const Matrix& f = cfg.frame_op;
  OdeProblem p;
  p.t0 = t0;
  p.tf = tf;
  p.y0 = Matrix::Identity(f.rows(), f.cols());
  p.rhs = [&](double t, const Matrix& y, Matrix& dy) {
    Matrix g = f;
    for (std::size_t j = 0; j < signals.size(); ++j) g += signals[j](t) * cfg.operators[j];
    dy.noalias() = g * y;
  };
  IntegrationOptions opts;
  opts.rtol = rtol;
  opts.atol = atol;
  const OdeSolution sol = integrate(std::move(p), opts);
  return expm(-tf * f) * sol.y_final * expm(t0 * f) * y0;
}

}  // namespace perturbdyn
