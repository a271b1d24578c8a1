#include <cmath>
#include <numbers>

#include "doctest.h"
#include "perturbdyn/error.hpp"
#include "perturbdyn/models.hpp"
#include "perturbdyn/robustness.hpp"
#include "perturbdyn/workflows.hpp"
#include "test_problems.hpp"

using namespace perturbdyn;

namespace {

// Second moment of N(0, s^2) restricted to |x| <= b, in closed form.
double truncated_second(double s, double b) {
  const double z = b / s;
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2 * std::numbers::pi);
  return s * s * (std::erf(z / std::sqrt(2.0)) - 2.0 * z * pdf);
}

Matrix embed_x(int dim) {
  Matrix m = zeros(dim, dim);
  m.topLeftCorner(2, 2) = pauli_x();
  return m;
}

}  // namespace

TEST_CASE("Gaussian moments") {
  const std::vector<Multiset> labels{{0}, {0, 1}, {0, 0}, {0, 0, 0}, {0, 0, 1, 1}, {1, 1, 1, 1}};
  const auto m = gaussian_moments(labels, {1.0, 0.5}, {8.0, 4.0});
  REQUIRE(m.size() == labels.size());
  CHECK(m[0].value == 0.0);
  CHECK(m[1].value == 0.0);
  CHECK(m[3].value == 0.0);
  CHECK(m[2].value >= 0.9999);
  CHECK(m[2].value == doctest::Approx(truncated_second(1.0, 8.0)).epsilon(1e-12));
  CHECK(m[4].value == doctest::Approx(truncated_second(1.0, 8.0) * truncated_second(0.5, 4.0)).epsilon(1e-12));
  CHECK(m[5].value == doctest::Approx(3.0 * std::pow(0.5, 4)).epsilon(1e-10));
  CHECK(even_multiplicities({0, 0, 1, 1}));
  CHECK_FALSE(even_multiplicities({0, 0, 1}));
}

TEST_CASE("moments scale with the variance") {
  const auto a = robustness_moments({0, 2}, {1e-3, 2e-3}, 8.0, 1);
  const auto b = robustness_moments({0, 2}, {2e-3, 4e-3}, 8.0, 1);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].label == b[i].label);
    CHECK(b[i].value == doctest::Approx(4.0 * a[i].value).epsilon(1e-12));
  }
}

TEST_CASE("subspace-trivial expansions are perfectly robust") {
  const int dim = 4;
  const Matrix p = projector_low(dim);
  auto trivial = [&](std::uint64_t seed, Complex a) {
    Matrix m = testing::random_hermitian(seed, dim, 1.0) * kI;
    m.leftCols(2).setZero();
    m(0, 0) = a;
    m(1, 1) = a;
    return m;
  };
  const ArrayPolynomial omega(std::nullopt, {{0}, {1}, {0, 0}, {0, 1}},
                              {trivial(1, Complex(0, 0.3)), trivial(2, Complex(0, -1.1)),
                               trivial(3, 2.0), trivial(4, Complex(0.5, 0.5))});
  const auto moments = gaussian_moments(all_multisets_up_to(2, 4), {0.1, 0.2}, {0.8, 1.6});
  CHECK(std::abs(robustness_objective(omega, p, moments).value) <= 1e-12);

  std::vector<Moment> zero = moments;
  for (auto& m : zero) m.value = 0.0;
  const ArrayPolynomial generic(std::nullopt, {{0}}, {testing::random_hermitian(9, dim, 1.0)});
  CHECK(robustness_objective(generic, p, zero).value == 0.0);
  CHECK(robustness_objective(ArrayPolynomial(std::nullopt, {}, {}), p, moments).value == 0.0);
}

TEST_CASE("single monomial by hand") {
  // Omega = c (-i X on the qubit), P the qubit projector: X P is traceless, so
  // h = ||-i X||^2 = 2 and g = 2 E[c^2].
  const ArrayPolynomial omega(std::nullopt, {{0}}, {Matrix(-kI * embed_x(3))});
  const double v = 0.37;
  const auto r = robustness_objective(omega, projector_low(3), {{{0, 0}, v}});
  CHECK(std::abs(r.value - 2.0 * v) <= 1e-10);
  REQUIRE(r.terms.size() == 1);
  CHECK(r.terms[0].label == Multiset{0, 0});
  CHECK(std::abs(r.terms[0].h - 2.0) <= 1e-12);
}

TEST_CASE("missing moments are configuration errors") {
  const ArrayPolynomial omega(std::nullopt, {{0}}, {Matrix(-kI * embed_x(3))});
  CHECK_THROWS_AS(robustness_objective(omega, projector_low(3), {}), ConfigError);
}
