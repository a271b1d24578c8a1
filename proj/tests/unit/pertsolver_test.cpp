#include <cmath>
#include <numbers>

#include "doctest.h"
#include "perturbdyn/error.hpp"
#include "perturbdyn/models.hpp"
#include "perturbdyn/pertsolver.hpp"

using namespace perturbdyn;

namespace {

PertSolverConfig rabi_config(double dt, int order, int cheb) {
  const auto model = build_rabi_model({5.0, 0.1});
  PertSolverConfig cfg;
  cfg.operators = model.operators;
  cfg.frame_op = model.frame_op;
  cfg.dt = dt;
  cfg.carrier_freqs = {5.0};
  cfg.chebyshev_orders = {cheb};
  cfg.expansion_order = order;
  return cfg;
}

Signal constant_drive(double nu) { return Signal{[](double) { return Complex(1.0); }, nu, 0.0}; }

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace

TEST_CASE("label counts follow the binomial law") {
  auto cfg = rabi_config(0.1, 1, 0);
  CHECK(variable_layout(cfg).size() == 2);
  CHECK(expansion_labels(cfg).size() == 2);
  for (int n = 1; n <= 6; ++n) {
    cfg.expansion_order = n;
    CHECK(expansion_labels(cfg).size() == static_cast<std::size_t>((n + 2) * (n + 1) / 2 - 1));
  }
  cfg.include_imag = {false};
  cfg.chebyshev_orders = {2};
  CHECK(variable_layout(cfg).size() == 3);

  PertSolverConfig two = rabi_config(0.1, 5, 2);
  two.operators.push_back(two.operators[0]);
  two.carrier_freqs.push_back(5.0);
  two.chebyshev_orders = {2, 2};
  CHECK(variable_layout(two).size() == 12);
  CHECK(expansion_labels(two).size() == 6187);
}

TEST_CASE("variable layout lists real parts before imaginary parts") {
  auto cfg = rabi_config(0.1, 1, 1);
  const auto layout = variable_layout(cfg);
  REQUIRE(layout.size() == 4);
  CHECK((layout[0].cheb_index == 0 && layout[0].part == Part::Real));
  CHECK((layout[1].cheb_index == 1 && layout[1].part == Part::Real));
  CHECK((layout[2].cheb_index == 0 && layout[2].part == Part::Imag));
  CHECK((layout[3].cheb_index == 1 && layout[3].part == Part::Imag));
}

TEST_CASE("configuration validation") {
  auto cfg = rabi_config(0.1, 2, 0);
  cfg.carrier_freqs.clear();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = rabi_config(-0.1, 2, 0);
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = rabi_config(0.1, 2, 0);
  cfg.operators[0] = identity(3);
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("step coefficients") {
  auto cfg = rabi_config(0.1, 1, 2);
  cfg.carrier_freqs = {0.0};
  cfg.frame_op = zeros(2, 2);
  PrecomputedExpansion exp;
  exp.config = cfg;
  exp.variable_map = variable_layout(cfg);

  Signal zero{[](double) { return Complex(0.0); }, 0.0, 0.0};
  for (double c : step_coefficients(exp, {zero}, 0.7)) CHECK(c == 0.0);

  Signal flat{[](double) { return Complex(0.6); }, 0.0, 0.0};
  const auto c = step_coefficients(exp, {flat}, 1.3);
  REQUIRE(c.size() == 6);
  CHECK(c[0] == doctest::Approx(0.6).epsilon(1e-14));
  for (std::size_t i = 1; i < 6; ++i) CHECK(std::abs(c[i]) <= 1e-14);

  exp.config.carrier_freqs = {2.5};
  const double t0 = 0.1;  // 2 pi * 2.5 * 0.1 = pi / 2
  const auto q = step_coefficients(exp, {constant_drive(2.5)}, t0);
  CHECK(std::abs(q[0]) <= 1e-14);
  CHECK(q[3] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("zero drive leaves the in-frame state unchanged") {
  const auto exp = precompute(rabi_config(0.02, 2, 1), Expansion::Dyson);
  Signal zero{[](double) { return Complex(0.0); }, 5.0, 0.0};
  const Matrix y0 = expm(-kI * 0.3 * pauli_z());
  CHECK(frobenius_norm(solve(exp, {zero}, 0.0, 40, y0) - y0) <= 1e-12);
  const auto mag = precompute(rabi_config(0.02, 2, 1), Expansion::Magnus);
  CHECK(frobenius_norm(solve(mag, {zero}, 0.1, 40, y0) - y0) <= 1e-12);
}

TEST_CASE("time translation of stored terms") {
  PertSolverConfig cfg;
  Matrix sx(2, 2);
  sx << 0, 1, 1, 0;
  cfg.operators = {-kI * sx};
  cfg.frame_op = -kI * pauli_z();
  cfg.dt = 0.25;
  cfg.carrier_freqs = {0.7};
  cfg.chebyshev_orders = {1};
  cfg.expansion_order = 2;
  for (auto mode : {Expansion::Dyson, Expansion::Magnus}) {
    CHECK(verify_time_translation(cfg, mode, {0, 3}, 0.0) == 0.0);
    for (double frac : {0.3, 0.7, 1.9}) {
      CHECK(verify_time_translation(cfg, mode, {1}, frac * cfg.dt) <= 1e-8);
      CHECK(verify_time_translation(cfg, mode, {0, 3}, frac * cfg.dt) <= 1e-8);
    }
  }
  cfg.frame_op = zeros(2, 2);
  CHECK(verify_time_translation(cfg, Expansion::Dyson, {0, 1}, 0.61) <= 1e-10);
}

TEST_CASE("simplified and naive stepping agree") {
  const auto drive = Signal{[](double t) { return Complex(std::cos(t), 0.3 * std::sin(2 * t)); }, 5.02, 0.1};
  for (auto mode : {Expansion::Dyson, Expansion::Magnus}) {
    const auto exp = precompute(rabi_config(0.02, 3, 1), mode);
    const Matrix a = solve(exp, {drive}, 0.05, 50, identity(2));
    const Matrix b = solve_naive(exp, {drive}, 0.05, 50, identity(2));
    CHECK(frobenius_norm(a - b) <= 1e-11);
  }
}

TEST_CASE("parallel reduction matches the sequential product") {
  const auto exp = precompute(rabi_config(0.02, 2, 1), Expansion::Magnus);
  const auto drive = constant_drive(5.0);
  const Matrix seq = solve(exp, {drive}, 0.0, 300, identity(2));
  SolveOptions opts;
  opts.parallel = true;
  opts.chunk = 64;
  for (unsigned threads : {1u, 2u, 3u}) {
    opts.threads = threads;
    CHECK(frobenius_norm(solve(exp, {drive}, 0.0, 300, identity(2), opts) - seq) <= 1e-12);
  }
}

TEST_CASE("resonant Rabi drive converges to the reference") {
  const auto cfg = rabi_config(0.02, 3, 1);
  const auto exp = precompute(cfg, Expansion::Dyson);
  const auto drive = constant_drive(5.0);
  const Matrix ref = reference_solve(cfg, {drive}, 0.0, 2.0, identity(2), 1e-12, 1e-12);
  CHECK(distance(solve(exp, {drive}, 0.0, 100, identity(2)), ref) <= 1e-6);
}

TEST_CASE("signal count must match the configuration") {
  const auto exp = precompute(rabi_config(0.02, 1, 0), Expansion::Dyson);
  CHECK_THROWS_AS(solve(exp, {}, 0.0, 10, identity(2)), ConfigError);
}
