#include <cmath>
#include <numbers>

#include "doctest.h"
#include "perturbdyn/error.hpp"
#include "perturbdyn/ode.hpp"
#include "test_problems.hpp"

using namespace perturbdyn;

namespace {

OdeProblem constant_problem(const Matrix& a, double tf) {
  OdeProblem p;
  p.t0 = 0.0;
  p.tf = tf;
  p.y0 = identity(a.rows());
  p.rhs = [a](double, const Matrix& y, Matrix& dy) { dy.noalias() = a * y; };
  return p;
}

// Driven two-level problem used for convergence studies.
OdeProblem driven_problem() {
  Matrix sz(2, 2), sx(2, 2);
  sz << 1, 0, 0, -1;
  sx << 0, 1, 1, 0;
  OdeProblem p;
  p.t0 = 0.0;
  p.tf = 3.0;
  p.y0 = identity(2);
  p.rhs = [sz, sx](double t, const Matrix& y, Matrix& dy) {
    dy.noalias() = (-kI * (2.0 * sz + std::cos(3.0 * t) * sx)) * y;
  };
  return p;
}

}  // namespace

TEST_CASE("zero right-hand side leaves the state alone") {
  OdeProblem p;
  p.tf = 2.0;
  p.y0 = testing::random_hermitian(3, 3, 1.0);
  p.rhs = [](double, const Matrix&, Matrix& dy) { dy.setZero(); };
  CHECK(solve_rk4(p, 0.1).y_final == p.y0);
  const auto sol = solve_dopri(p);
  CHECK(sol.y_final == p.y0);
  CHECK(sol.n_steps == 1);
}

TEST_CASE("RK4 returns after one period") {
  const double w = 3.0;
  Matrix a(1, 1);
  a(0, 0) = Complex(0, -w);
  const auto sol = solve_rk4(constant_problem(a, 2 * std::numbers::pi / w), 1e-3);
  CHECK(std::abs(sol.y_final(0, 0) - 1.0) <= 1e-10);
}

TEST_CASE("constant generator matches the exponential") {
  const Matrix a = -kI * testing::random_hermitian(11, 3, 0.5) + 0.1 * testing::random_hermitian(12, 3, 0.5);
  const Matrix exact = expm(a * 1.5);
  CHECK(frobenius_norm(solve_rk4(constant_problem(a, 1.5), 1.5 / 1000).y_final - exact) <= 1e-8);
  CHECK(frobenius_norm(solve_dopri(constant_problem(a, 1.5)).y_final - exact) <= 1e-10);
}

TEST_CASE("RK4 converges at fourth order") {
  const auto p = driven_problem();
  const Matrix ref = solve_dopri(p, {.rtol = 1e-14, .atol = 1e-14}).y_final;
  const double e1 = frobenius_norm(solve_rk4(p, 0.02).y_final - ref);
  const double e2 = frobenius_norm(solve_rk4(p, 0.01).y_final - ref);
  const double ratio = e1 / e2;
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("adaptive error falls as tolerance tightens") {
  const auto p = driven_problem();
  const Matrix ref = solve_dopri(p, {.rtol = 1e-14, .atol = 1e-14}).y_final;
  double previous = 1.0;
  for (double tol : {1e-6, 1e-7, 1e-8, 1e-9, 1e-10}) {
    const double err = frobenius_norm(solve_dopri(p, {.rtol = tol, .atol = tol}).y_final - ref);
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("unitary propagators stay unitary") {
  const auto sol = solve_dopri(driven_problem());
  CHECK(frobenius_norm(sol.y_final.adjoint() * sol.y_final - identity(2)) <= 1e-9);
}

TEST_CASE("initial step guess barely matters") {
  const auto p = driven_problem();
  const Matrix a = solve_dopri(p).y_final;
  const Matrix b = solve_dopri(p, {.rtol = 1e-12, .atol = 1e-12, .initial_step = 1e-5}).y_final;
  const Matrix c = solve_dopri(p, {.rtol = 1e-12, .atol = 1e-12, .initial_step = 0.3}).y_final;
  CHECK(frobenius_norm(a - b) <= 1e-11);
  CHECK(frobenius_norm(a - c) <= 1e-11);
}

TEST_CASE("breakpoints split the integration at discontinuities") {
  OdeProblem p;
  p.tf = 2.0;
  p.y0 = identity(1);
  p.rhs = [](double t, const Matrix& y, Matrix& dy) { dy = (t < 1.0 ? 1.0 : -2.0) * y; };
  p.breakpoints = {1.0};
  const auto sol = solve_dopri(p);
  CHECK(std::abs(sol.y_final(0, 0) - std::exp(-1.0)) <= 1e-11);
}

TEST_CASE("bad problems are rejected") {
  OdeProblem p;
  p.tf = 1.0;
  p.y0 = identity(2);
  CHECK_THROWS_AS(solve_dopri(p), ConfigError);
  p.rhs = [](double, const Matrix& y, Matrix& dy) { dy = 1e300 * y * 1e300; };
  CHECK_THROWS_AS(solve_rk4(p, 0.1), DivergenceError);
  OdeProblem q = constant_problem(identity(2), 1.0);
  q.tf = -1.0;
  CHECK_THROWS_AS(solve_dopri(q), ConfigError);
}

TEST_CASE("integration options dispatch") {
  const auto p = driven_problem();
  IntegrationOptions rk;
  rk.method = IntegrationMethod::Rk4;
  rk.rk4_dt = 1e-3;
  const Matrix ref = solve_dopri(p).y_final;
  CHECK(frobenius_norm(integrate(p, rk).y_final - ref) <= 1e-9);
  CHECK(frobenius_norm(integrate(p, IntegrationOptions{}).y_final - ref) == 0.0);
}
