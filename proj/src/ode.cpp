#include "perturbdyn/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "perturbdyn/error.hpp"

namespace perturbdyn {

namespace {

void check_problem(const OdeProblem& p) {
  if (!p.rhs) throw ConfigError("ODE problem has no right-hand side");
  if (!(p.tf >= p.t0)) throw ConfigError("ODE problem requires tf >= t0");
}

void check_finite(const Matrix& y, double t) {
  if (!y.allFinite()) {
    throw DivergenceError("non-finite state at t = " + std::to_string(t), t);
  }
}

// Segment boundaries: t0, interior breakpoints (sorted, deduplicated), tf.
std::vector<double> segments(const OdeProblem& p) {
  std::vector<double> cuts = {p.t0};
  std::vector<double> inner;
  for (double b : p.breakpoints) {
    if (b > p.t0 && b < p.tf) inner.push_back(b);
  }
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  cuts.insert(cuts.end(), inner.begin(), inner.end());
  cuts.push_back(p.tf);
  return cuts;
}

// Max over entries of |e| / (atol + rtol * max(|y|, |y_new|)).
double scaled_error(const Matrix& err, const Matrix& y, const Matrix& y_new, double rtol,
                    double atol) {
  double worst = 0.0;
  const Eigen::Index n = err.size();
  const Complex* e = err.data();
  const Complex* a = y.data();
  const Complex* b = y_new.data();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double scale = atol + rtol * std::sqrt(std::max(std::norm(a[i]), std::norm(b[i])));
    worst = std::max(worst, std::sqrt(std::norm(e[i])) / scale);
  }
  if (std::isnan(worst)) return std::numeric_limits<double>::infinity();
  return worst;
}

double scaled_norm(const Matrix& v, const Matrix& y, double rtol, double atol) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double scale = atol + rtol * std::abs(y.data()[i]);
    worst = std::max(worst, std::abs(v.data()[i]) / scale);
  }
  return worst;
}

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

class Dopri {
 public:
  Dopri(const OdeProblem& p, const DopriOptions& o) : p_(p), o_(o) {
    const auto rows = p.y0.rows();
    const auto cols = p.y0.cols();
    for (Matrix* m : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &tmp_, &y_new_, &err_}) {
      m->resize(rows, cols);
    }
  }

  OdeSolution run() {
    OdeSolution sol;
    Matrix y = p_.y0;
    const double span = p_.tf - p_.t0;
    sol.t_final = p_.t0;
    if (span == 0.0) {
      sol.y_final = y;
      return sol;
    }
    const double min_step = 1e-14 * span;
    const auto cuts = segments(p_);
    double h_next = o_.initial_step.value_or(0.0);
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      double t = cuts[s];
      const double t_end = cuts[s + 1];
      p_.rhs(t, y, k1_);
      if (h_next <= 0.0 || s > 0) {
        const double guess = initial_step(t, t_end, y);
        h_next = (h_next > 0.0) ? std::min(h_next, guess) : guess;
      }
      double fac_old = 1e-4;
      while (t < t_end) {
        double h = std::min(h_next, t_end - t);
        // Avoid leaving a sliver shorter than the minimum step.
        if (t_end - (t + h) < min_step) h = t_end - t;
        if (sol.n_steps + sol.n_rejected >= o_.max_steps) {
          throw StiffnessError("maximum step count exceeded at t = " + std::to_string(t), t);
        }
        const double err = attempt(t, h, y);
        if (err <= 1.0) {
          const double fac11 = std::pow(err, 0.17);
          double fac = fac11 / std::pow(fac_old, 0.04);
          fac = std::clamp(fac / 0.9, 0.1, 5.0);
          fac_old = std::max(err, 1e-4);
          t = (t_end - (t + h) < min_step) ? t_end : t + h;
          check_finite(y_new_, t);
          y.swap(y_new_);
          k1_.swap(k7_);  // first-same-as-last
          ++sol.n_steps;
          h_next = h / fac;
        } else {
          ++sol.n_rejected;
          const double fac11 = std::isfinite(err) ? std::pow(err, 0.17) : 5.0;
          h_next = h / std::min(5.0, fac11 / 0.9);
          if (h_next < min_step) {
            throw StiffnessError("step size underflow at t = " + std::to_string(t), t);
          }
        }
      }
    }
    sol.t_final = p_.tf;
    sol.y_final = std::move(y);
    return sol;
  }

 private:
  // One trial step from (t, y) with k1_ = f(t, y); fills y_new_ and k7_.
  double attempt(double t, double h, const Matrix& y) {
    tmp_ = y + h * (a21 * k1_);
    p_.rhs(t + c2 * h, tmp_, k2_);
    tmp_ = y + h * (a31 * k1_ + a32 * k2_);
    p_.rhs(t + c3 * h, tmp_, k3_);
    tmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
    p_.rhs(t + c4 * h, tmp_, k4_);
    tmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
    p_.rhs(t + c5 * h, tmp_, k5_);
    tmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
    p_.rhs(t + h, tmp_, k6_);
    y_new_ = y + h * (a71 * k1_ + a73 * k3_ + a74 * k4_ + a75 * k5_ + a76 * k6_);
    p_.rhs(t + h, y_new_, k7_);
    err_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
    return scaled_error(err_, y, y_new_, o_.rtol, o_.atol);
  }

  // Span/100 capped by the usual derivative-based estimate; the whole
  // segment when the derivatives vanish identically.
  double initial_step(double t, double t_end, const Matrix& y) {
    const double seg = t_end - t;
    const double d0 = scaled_norm(y, y, o_.rtol, o_.atol);
    const double d1 = scaled_norm(k1_, y, o_.rtol, o_.atol);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * seg : 0.01 * d0 / d1;
    h0 = std::min(h0, seg);
    tmp_ = y + h0 * k1_;
    p_.rhs(t + h0, tmp_, k2_);
    const double d2 = scaled_norm(k2_ - k1_, y, o_.rtol, o_.atol) / h0;
    if (d1 == 0.0 && d2 == 0.0) return seg;
    const double dmax = std::max(d1, d2);
    const double h1 =
        dmax <= 1e-15 ? std::max(1e-6 * seg, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
    return std::min({seg / 100.0, 100.0 * h0, h1});
  }

  const OdeProblem& p_;
  DopriOptions o_;
  Matrix k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, y_new_, err_;
};

}  // namespace

OdeSolution solve_rk4(const OdeProblem& p, double dt) {
  check_problem(p);
  if (!(dt > 0.0)) throw ConfigError("solve_rk4 requires dt > 0");
  OdeSolution sol;
  Matrix y = p.y0;
  Matrix k1(y.rows(), y.cols()), k2(y.rows(), y.cols()), k3(y.rows(), y.cols()),
      k4(y.rows(), y.cols()), tmp(y.rows(), y.cols());
  double t = p.t0;
  const double span = p.tf - p.t0;
  const long full = static_cast<long>(std::floor(span / dt * (1.0 + 1e-12)));
  long steps = full;
  if (p.t0 + static_cast<double>(full) * dt < p.tf - 1e-12 * std::max(1.0, std::abs(p.tf))) {
    ++steps;
  }
  for (long n = 0; n < steps; ++n) {
    const double t_next = (n + 1 == steps) ? p.tf : p.t0 + static_cast<double>(n + 1) * dt;
    const double h = t_next - t;
    p.rhs(t, y, k1);
    tmp = y + (0.5 * h) * k1;
    p.rhs(t + 0.5 * h, tmp, k2);
    tmp = y + (0.5 * h) * k2;
    p.rhs(t + 0.5 * h, tmp, k3);
    tmp = y + h * k3;
    p.rhs(t + h, tmp, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = t_next;
    check_finite(y, t);
    ++sol.n_steps;
  }
  sol.t_final = p.tf;
  sol.y_final = std::move(y);
  return sol;
}

OdeSolution solve_dopri(const OdeProblem& p, const DopriOptions& opts) {
  check_problem(p);
  if (!(opts.rtol > 0.0) || !(opts.atol > 0.0)) {
    throw ConfigError("solve_dopri requires rtol > 0 and atol > 0");
  }
  Dopri stepper(p, opts);
  return stepper.run();
}

OdeSolution integrate(OdeProblem p, const IntegrationOptions& opts) {
  p.breakpoints.insert(p.breakpoints.end(), opts.breakpoints.begin(), opts.breakpoints.end());
  if (opts.method == IntegrationMethod::Rk4) return solve_rk4(p, opts.rk4_dt);
  DopriOptions d;
  d.rtol = opts.rtol;
  d.atol = opts.atol;
  return solve_dopri(p, d);
}

}  // namespace perturbdyn
