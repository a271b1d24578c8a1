#include "perturbdyn/models.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "perturbdyn/error.hpp"

namespace perturbdyn {

using std::numbers::pi;

Matrix number_op(int dim) {
  Matrix n = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

Matrix lowering_op(int dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

Matrix projector_high(int dim) {
  Matrix p = Matrix::Zero(dim, dim);
  for (int k = 2; k < dim; ++k) p(k, k) = 1.0;
  return p;
}

Matrix projector_low(int dim) {
  Matrix p = Matrix::Zero(dim, dim);
  for (int k = 0; k < std::min(dim, 2); ++k) p(k, k) = 1.0;
  return p;
}

void TransmonParams::validate() const {
  if (dim < 2) throw ConfigError("transmon dim must be >= 2, got " + std::to_string(dim));
}

namespace {

struct TransmonPieces {
  Matrix freq;      // 2 pi nu N
  Matrix anharm;    // pi alpha N (N - I)
  Matrix spacing;   // (pi / 3) beta N (N - I) (N - 2I)
  Matrix drive;     // 2 pi r (a + a^dag)
  Matrix drive_hi;  // 2 pi r P (a + a^dag) P
};

TransmonPieces transmon_pieces(const TransmonParams& p) {
  p.validate();
  const Matrix n = number_op(p.dim);
  const Matrix id = identity(p.dim);
  const Matrix a = lowering_op(p.dim);
  const Matrix x = a + a.adjoint();
  const Matrix ph = projector_high(p.dim);
  TransmonPieces out;
  out.freq = 2.0 * pi * p.nu * n;
  out.anharm = pi * p.alpha * n * (n - id);
  out.spacing = (pi / 3.0) * p.beta * n * (n - id) * (n - 2.0 * id);
  out.drive = 2.0 * pi * p.r * x;
  out.drive_hi = 2.0 * pi * p.r * ph * x * ph;
  return out;
}

}  // namespace

Matrix transmon_static_hamiltonian(const TransmonParams& p) {
  const auto h = transmon_pieces(p);
  return h.freq + h.anharm + h.spacing;
}

MatrixFunction transmon_generator(const TransmonParams& p, const Signal& drive,
                                  std::vector<double> c) {
  if (c.size() != static_cast<std::size_t>(kTransmonPerturbations)) {
    throw ArityError("transmon generator needs " + std::to_string(kTransmonPerturbations) +
                     " perturbation values, got " + std::to_string(c.size()));
  }
  const auto h = transmon_pieces(p);
  const Matrix static_part =
      (1.0 + c[0]) * h.freq + (1.0 + c[1]) * h.anharm + (1.0 + c[4]) * h.spacing;
  return [static_part, h, drive, c](double t) -> Matrix {
    const double s = drive(t);
    const Matrix hmat = static_part + (s * (1.0 + c[2]) + c[3] * s * s) * h.drive +
                        (c[5] * s) * h.drive_hi;
    return -kI * hmat;
  };
}

PerturbationProblem build_transmon_perturbation_problem(const TransmonParams& p,
                                                        const Signal& drive, double t_final,
                                                        const std::vector<int>& perturbations) {
  const auto h = transmon_pieces(p);
  const Matrix static_part = h.freq + h.anharm + h.spacing;
  PerturbationProblem out;
  out.dim = p.dim;
  out.t0 = 0.0;
  out.tf = t_final;
  out.frame_generator = [static_part, drive_op = h.drive, drive](double t) -> Matrix {
    return -kI * (static_part + drive(t) * drive_op);
  };
  std::vector<MatrixFunction> ops(kTransmonPerturbations);
  ops[0] = [m = Matrix(-kI * h.freq)](double) { return m; };
  ops[1] = [m = Matrix(-kI * h.anharm)](double) { return m; };
  ops[2] = [m = Matrix(-kI * h.drive), drive](double t) -> Matrix { return drive(t) * m; };
  ops[3] = [m = Matrix(-kI * h.drive), drive](double t) -> Matrix {
    const double s = drive(t);
    return (s * s) * m;
  };
  ops[4] = [m = Matrix(-kI * h.spacing)](double) { return m; };
  ops[5] = [m = Matrix(-kI * h.drive_hi), drive](double t) -> Matrix { return drive(t) * m; };

  for (int j : perturbations) {
    if (j < 0 || j >= kTransmonPerturbations) {
      throw ConfigError("transmon perturbation index " + std::to_string(j) + " out of range [0, " +
                        std::to_string(kTransmonPerturbations) + ")");
    }
    out.perturbations.push_back({Multiset{j}, ops[static_cast<std::size_t>(j)]});
  }
  return out;
}

std::vector<int> all_transmon_perturbations() {
  std::vector<int> out(kTransmonPerturbations);
  for (int j = 0; j < kTransmonPerturbations; ++j) out[static_cast<std::size_t>(j)] = j;
  return out;
}

std::vector<std::vector<double>> chebyshev_control_basis(int k, int n_samples) {
  if (k < 1 || n_samples < 1) throw ConfigError("control basis needs k >= 1 and samples >= 1");
  std::vector<std::vector<double>> basis(static_cast<std::size_t>(k),
                                         std::vector<double>(static_cast<std::size_t>(n_samples)));
  for (int n = 0; n < n_samples; ++n) {
    const double x = 2.0 * (n + 0.5) / n_samples - 1.0;
    const auto t = chebyshev_values(x, k - 1);
    for (int j = 0; j < k; ++j) {
      basis[static_cast<std::size_t>(j)][static_cast<std::size_t>(n)] = t[static_cast<std::size_t>(j)];
    }
  }
  return basis;
}

PiecewiseConstantEnvelope smooth_envelope(const std::vector<std::vector<double>>& b,
                                          const std::vector<std::vector<double>>& basis,
                                          double coarse_dt, double fine_dt,
                                          const SmoothingKernel& kernel) {
  if (b.size() != 2) throw ShapeError("smooth_envelope: parameters need exactly two rows");
  if (basis.empty()) throw ShapeError("smooth_envelope: empty basis");
  const std::size_t k = basis.size();
  const std::size_t n = basis.front().size();
  for (const auto& row : b) {
    if (row.size() != k) {
      throw ShapeError("smooth_envelope: parameter rows have " + std::to_string(row.size()) +
                       " entries but the basis has " + std::to_string(k) + " vectors");
    }
  }
  for (const auto& v : basis) {
    if (v.size() != n) throw ShapeError("smooth_envelope: basis vectors differ in length");
  }
  if (!(fine_dt > 0.0) || !(coarse_dt > 0.0)) throw ConfigError("smooth_envelope: non-positive dt");
  if (!(kernel.sigma > 0.0) || kernel.samples < 1) {
    throw ConfigError("smooth_envelope: kernel needs sigma > 0 and at least one sample");
  }
  const double ratio_f = coarse_dt / fine_dt;
  const auto ratio = static_cast<std::size_t>(std::lround(ratio_f));
  if (ratio == 0 || std::abs(ratio_f - static_cast<double>(ratio)) > 1e-9) {
    throw ConfigError("smooth_envelope: coarse_dt must be an integer multiple of fine_dt");
  }

  std::vector<double> kern(static_cast<std::size_t>(kernel.samples));
  const double centre = 0.5 * (kernel.samples - 1);
  double total = 0.0;
  for (int i = 0; i < kernel.samples; ++i) {
    const double t = (i - centre) * fine_dt;
    kern[static_cast<std::size_t>(i)] = std::exp(-0.5 * (t / kernel.sigma) * (t / kernel.sigma));
    total += kern[static_cast<std::size_t>(i)];
  }
  for (double& v : kern) v /= total;

  auto channel = [&](const std::vector<double>& coeffs) {
    std::vector<double> fine;
    fine.reserve(n * ratio);
    for (std::size_t s = 0; s < n; ++s) {
      double x = 0.0;
      for (std::size_t j = 0; j < k; ++j) x += coeffs[j] * basis[j][s];
      const double y = std::atan(x) / (pi / 2.0);
      fine.insert(fine.end(), ratio, y);
    }
    std::vector<double> out(fine.size() + kern.size() - 1, 0.0);
    for (std::size_t i = 0; i < fine.size(); ++i) {
      for (std::size_t q = 0; q < kern.size(); ++q) out[i + q] += fine[i] * kern[q];
    }
    return out;
  };
  const auto re = channel(b[0]);
  const auto im = channel(b[1]);
  PiecewiseConstantEnvelope env;
  env.dt = fine_dt;
  env.t_start = 0.0;
  env.samples.reserve(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) env.samples.emplace_back(re[i], im[i]);
  return env;
}

Matrix pauli_x() {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  return x;
}

double infidelity(const Matrix& u, const Matrix& target) {
  if (u.rows() < 2 || u.cols() < 2) throw ShapeError("infidelity: matrix smaller than 2x2");
  if (target.rows() != 2 || target.cols() != 2) throw ShapeError("infidelity: target must be 2x2");
  const Complex tr = (target.adjoint() * u.topLeftCorner(2, 2)).trace();
  return 1.0 - std::norm(tr) / 4.0;
}

Matrix approx_unitary(const Matrix& v, const ArrayPolynomial& magnus, std::span<const double> c) {
  const Matrix omega = magnus(c);
  if (omega.rows() == 0) return v;
  if (v.cols() != omega.rows()) throw ShapeError("approx_unitary: shape mismatch");
  return v * expm(omega);
}

void CxPulseParams::validate() const {
  if (!(sigma > 0.0)) throw ConfigError("cx pulse: sigma must be positive");
  if (!(T > 2.0 * r * sigma)) throw ConfigError("cx pulse: T must exceed 2 r sigma");
}

namespace {

double rise_offset(double r) { return std::exp(-0.5 * r * r); }

double rise_norm(double r, double sigma) {
  return sigma * (std::sqrt(2.0 * pi) * std::erf(r / std::sqrt(2.0)) - 2.0 * r * rise_offset(r));
}

}  // namespace

double cx_flat_top(double t, double A, const CxPulseParams& p) {
  if (t < 0.0 || t > p.T) return 0.0;
  const double c = rise_offset(p.r);
  const double d = rise_norm(p.r, p.sigma);
  const double w = p.r * p.sigma;
  if (t < w) {
    const double z = (t - w) / p.sigma;
    return A * (std::exp(-0.5 * z * z) - c) / d;
  }
  if (t <= p.T - w) return A * (1.0 - c) / d;
  const double z = ((p.T - t) - w) / p.sigma;
  return A * (std::exp(-0.5 * z * z) - c) / d;
}

double cx_antisymmetric(double t, double A, const CxPulseParams& p) {
  CxPulseParams half = p;
  half.T = 0.5 * p.T;
  if (t < half.T) return cx_flat_top(t, A, half);
  return -cx_flat_top(t - half.T, A, half);
}

CxEnvelopes cx_envelopes(const CxPulseParams& p, Complex amp_sym, Complex amp_asym,
                         Complex amp_ctrl) {
  CxPulseParams half = p;
  half.T = 0.5 * p.T;
  half.validate();
  CxEnvelopes out;
  out.control = [p, amp_ctrl](double t) { return amp_ctrl * cx_flat_top(t, 1.0, p); };
  out.target = [p, amp_sym, amp_asym](double t) {
    return amp_sym * cx_flat_top(t, 1.0, p) + amp_asym * cx_antisymmetric(t, 1.0, p);
  };
  return out;
}

void TwoTransmonParams::validate() const {
  if (dim < 2) throw ConfigError("two-transmon dim must be >= 2, got " + std::to_string(dim));
}

DrivenModel build_two_transmon_generator(const TwoTransmonParams& p) {
  p.validate();
  const Matrix id = identity(p.dim);
  const Matrix n = number_op(p.dim);
  const Matrix a = lowering_op(p.dim);
  const Matrix n0 = kron(n, id);
  const Matrix n1 = kron(id, n);
  const Matrix a0 = kron(a, id);
  const Matrix a1 = kron(id, a);
  const Matrix big_id = identity(p.dim * p.dim);
  const Matrix h = 2.0 * pi * p.nu0 * n0 + pi * p.alpha0 * n0 * (n0 - big_id) +
                   2.0 * pi * p.nu1 * n1 + pi * p.alpha1 * n1 * (n1 - big_id) +
                   2.0 * pi * p.J * (a0 * a1.adjoint() + a0.adjoint() * a1);
  DrivenModel out;
  out.frame_op = -kI * h;
  out.operators.push_back(-kI * 2.0 * pi * (a0 + a0.adjoint()));
  out.operators.push_back(-kI * 2.0 * pi * (a1 + a1.adjoint()));
  return out;
}

DrivenModel build_rabi_model(const RabiParams& p) {
  Matrix sz = Matrix::Zero(2, 2);
  sz(0, 0) = 1.0;
  sz(1, 1) = -1.0;
  DrivenModel out;
  out.frame_op = -kI * 2.0 * pi * p.nu * sz / 2.0;
  out.operators.push_back(-kI * 2.0 * pi * p.r * pauli_x());
  return out;
}

}  // namespace perturbdyn
