#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "perturbdyn/linalg.hpp"

namespace perturbdyn {

/// Right-hand side of y' = f(t, y). Writes f(t, y) into `dydt`, which arrives
/// already sized like `y`.
using OdeRhs = std::function<void(double t, const Matrix& y, Matrix& dydt)>;

/// Initial value problem over a matrix-valued state. Block-structured states
/// (several d x d matrices) are stored side by side as columns of one matrix.
struct OdeProblem {
  OdeRhs rhs;
  double t0 = 0.0;
  double tf = 0.0;
  Matrix y0;
  /// Interior times where the right-hand side may be non-smooth; adaptive
  /// integration restarts exactly at each of them.
  std::vector<double> breakpoints;
};

struct OdeSolution {
  double t_final = 0.0;
  Matrix y_final;
  long n_steps = 0;
  long n_rejected = 0;
};

struct DopriOptions {
  double rtol = 1e-12;
  double atol = 1e-12;
  /// Overrides the automatic initial step when set.
  std::optional<double> initial_step;
  long max_steps = 50'000'000;
};

/// Classical fixed-step RK4. The last step is shortened to land on tf.
OdeSolution solve_rk4(const OdeProblem& p, double dt);

/// Dormand-Prince 5(4) with PI step-size control.
OdeSolution solve_dopri(const OdeProblem& p, const DopriOptions& opts = {});

enum class IntegrationMethod { Dopri, Rk4 };

/// Integrator selection shared by the higher-level solvers.
struct IntegrationOptions {
  IntegrationMethod method = IntegrationMethod::Dopri;
  double rtol = 1e-12;
  double atol = 1e-12;
  /// Step for the RK4 method.
  double rk4_dt = 1e-3;
  std::vector<double> breakpoints;
};

OdeSolution integrate(OdeProblem p, const IntegrationOptions& opts);

}  // namespace perturbdyn
