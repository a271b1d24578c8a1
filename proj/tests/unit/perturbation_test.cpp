#include <cmath>
#include <numbers>

#include "doctest.h"
#include "dyson_oracle.hpp"
#include "perturbdyn/error.hpp"
#include "perturbdyn/perturbation.hpp"
#include "test_problems.hpp"

using namespace perturbdyn;
using namespace perturbdyn::testing;

namespace {

Matrix pauli(char which) {
  Matrix m(2, 2);
  if (which == 'x') m << 0, 1, 1, 0;
  if (which == 'y') m << 0, -kI, kI, 0;
  if (which == 'z') m << 1, 0, 0, -1;
  return m;
}

PerturbationProblem constant_problem(const Matrix& a, double T, std::vector<Multiset> requested) {
  PerturbationProblem p;
  p.dim = a.rows();
  p.tf = T;
  p.perturbations.push_back({{0}, [a](double) { return a; }});
  p.requested = std::move(requested);
  return p;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("frame only") {
  PerturbationProblem p;
  p.frame_generator = [](double) -> Matrix { return -kI * std::numbers::pi * pauli('z'); };
  p.dim = 2;
  p.tf = 1.0;
  const auto r = compute_dyson_terms(p);
  CHECK(r.labels.empty());
  CHECK(r.terms.empty());
  CHECK(frobenius_norm(r.frame_solution - expm(-kI * std::numbers::pi * pauli('z'))) <= 1e-10);
}

TEST_CASE("constant perturbation without frame") {
  const Matrix a = -kI * random_hermitian(3, 2, 1.0);
  const double T = 0.8;
  auto p = constant_problem(a, T, {{0, 0}});
  p.remove_frame = true;
  const auto r = compute_dyson_terms(p);
  REQUIRE(r.labels == std::vector<Multiset>{{0}, {0, 0}});
  CHECK(frobenius_norm(r.term({0}) - a * T) <= 1e-12);
  CHECK(frobenius_norm(r.term({0, 0}) - a * a * (T * T / 2)) <= 1e-12);

  p.expansion = Expansion::Magnus;
  const auto m = compute_perturbation_terms(p);
  CHECK(frobenius_norm(m.term({0}) - a * T) <= 1e-12);
  CHECK(frobenius_norm(m.term({0, 0})) <= 1e-12);
}

TEST_CASE("oracle sanity on constant generators") {
  const Matrix a = -kI * random_hermitian(4, 2, 1.0);
  const auto p = constant_problem(a, 0.9, {});
  CHECK(frobenius_norm(dyson_oracle(p, {0}, 201) - 0.9 * a) <= 1e-12);
  CHECK(frobenius_norm(dyson_oracle(p, {0, 0}, 201) - a * a * (0.81 / 2)) <= 1e-8);
}

TEST_CASE("two non-commuting variables agree with the oracle") {
  PerturbationProblem p;
  p.dim = 2;
  p.tf = 1.0;
  p.perturbations.push_back({{0}, [](double t) -> Matrix { return std::cos(t) * pauli('x'); }});
  p.perturbations.push_back({{1}, [](double) -> Matrix { return pauli('z'); }});
  p.requested = {{0, 1}};
  p.remove_frame = true;
  const auto r = compute_dyson_terms(p);
  CHECK(max_abs(r.term({0, 1}) - dyson_oracle(p, {0, 1}, 201)) <= 1e-6);
}

TEST_CASE("random problems: oracle, factorization and first order") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto p = random_two_level_problem(seed);
    p.requested = all_multisets_up_to(2, 3);
    p.remove_frame = true;
    const auto d = compute_dyson_terms(p);
    for (const auto& l : d.labels) {
      CHECK(max_abs(d.term(l) - dyson_oracle(p, l, 201)) <= 1e-6);
    }
    p.remove_frame = false;
    const auto e = compute_dyson_terms(p);
    for (const auto& l : e.labels) {
      CHECK(frobenius_norm(d.frame_solution * d.term(l) - e.term(l)) <= 1e-10);
    }
    p.expansion = Expansion::Magnus;
    const auto o = compute_perturbation_terms(p);
    CHECK(o.frame_removed);
    for (const auto& l : o.labels) {
      if (l.size() == 1) CHECK(o.term(l) == d.term(l));
    }
  }
}

TEST_CASE("Magnus from Dyson on hand-built terms") {
  Matrix d0 = random_hermitian(1, 2, 1.0), d1 = random_hermitian(2, 2, 1.0);
  Matrix d00 = random_hermitian(3, 2, 1.0), d01 = random_hermitian(4, 2, 1.0);
  const std::vector<Multiset> labels{{0}, {1}, {0, 0}, {0, 1}};
  const auto o = magnus_from_dyson(labels, {d0, d1, d00, d01});
  CHECK(o[0] == d0);
  CHECK(o[1] == d1);
  // Second order: O_I = D_I - (1/2) sum over ordered splits of D_J D_{I\J}.
  CHECK(frobenius_norm(o[2] - (d00 - 0.5 * d0 * d0)) <= 1e-14);
  CHECK(frobenius_norm(o[3] - (d01 - 0.5 * (d0 * d1 + d1 * d0))) <= 1e-14);

  // Third order against log(I + D) expanded by hand for one variable.
  const Matrix d000 = random_hermitian(5, 2, 1.0);
  const auto o1 = magnus_from_dyson({{0}, {0, 0}, {0, 0, 0}}, {d0, d00, d000});
  const Matrix log3 = d000 - 0.5 * (d0 * d00 + d00 * d0) + d0 * d0 * d0 / 3.0;
  CHECK(frobenius_norm(o1[2] - log3) <= 1e-13);

  CHECK_THROWS_AS(magnus_from_dyson({{0, 1}}, {d01}), ConfigError);
}

TEST_CASE("Magnus reconstruction error shrinks at third order") {
  auto p = random_two_level_problem(9);
  p.perturbations.pop_back();  // first-order terms only
  p.requested = all_multisets_up_to(2, 2);
  p.expansion = Expansion::Magnus;
  const auto o = compute_perturbation_terms(p);
  const auto poly = o.polynomial();
  auto err = [&](double scale) {
    const std::vector<double> c{0.6 * scale, -0.8 * scale};
    const Matrix u = propagate(full_generator(p, c), 2, p.t0, p.tf);
    return frobenius_norm(expm(poly(c)) - solve_linear(o.frame_solution, u));
  };
  const double ratio = err(0.05) / err(0.025);
  CHECK(ratio >= 7.0);
  CHECK(ratio <= 9.5);
}

TEST_CASE("labels without operators give zero terms") {
  auto p = constant_problem(-kI * pauli('x'), 1.0, {{0, 2}});
  const auto r = compute_dyson_terms(p);
  CHECK(frobenius_norm(r.term({2})) == 0.0);
  CHECK(frobenius_norm(r.term({0, 2})) == 0.0);
}

TEST_CASE("shape problems are reported") {
  PerturbationProblem p;
  p.tf = 1.0;
  p.perturbations.push_back({{0}, [](double) { return identity(2); }});
  p.perturbations.push_back({{1}, [](double) { return identity(3); }});
  p.requested = {{0}, {1}};
  CHECK_THROWS_AS(compute_dyson_terms(p), ShapeError);
}
