#include <vector>

#include "doctest.h"
#include "perturbdyn/array_polynomial.hpp"
#include "perturbdyn/error.hpp"
#include "test_problems.hpp"

using namespace perturbdyn;
using testing::random_hermitian;

namespace {

Matrix rnd(std::uint64_t seed, Eigen::Index d = 3) {
  return random_hermitian(seed, d, 1.0) + kI * random_hermitian(seed + 1000, d, 1.0);
}

}  // namespace

TEST_CASE("evaluation at the origin gives the constant") {
  const Matrix k = rnd(1);
  const ArrayPolynomial with_const(k, {{0}, {1}}, {rnd(2), rnd(3)});
  const std::vector<double> zero{0.0, 0.0};
  CHECK(poly_eval(with_const, zero) == k);
  const ArrayPolynomial no_const(std::nullopt, {{0}}, {rnd(2)});
  CHECK(poly_eval(no_const, std::vector<double>{0.0}) == Matrix::Zero(3, 3));
}

TEST_CASE("monomials multiply their variables") {
  const Matrix m = rnd(4);
  const ArrayPolynomial p(std::nullopt, {{0, 0, 1}}, {m});
  const std::vector<double> c{2.0, 3.0};
  CHECK(frobenius_norm(poly_eval(p, c) - 12.0 * m) <= 1e-14);
  CHECK_THROWS_AS(poly_eval(p, std::vector<double>{2.0}), ArityError);
}

TEST_CASE("evaluation matches a direct monomial sum") {
  const Matrix a = rnd(5), b = rnd(6), cm = rnd(7);
  const ArrayPolynomial p(std::nullopt, {{0}, {1}, {0, 1}}, {a, b, cm});
  for (auto [x, y] : std::vector<std::pair<double, double>>{{0.1, -2}, {3, 0.5}, {-1, -1}, {0.25, 7}, {2, 0}}) {
    const Matrix direct = x * a + y * b + x * y * cm;
    CHECK(frobenius_norm(p(std::vector<double>{x, y}) - direct) <= 1e-13);
  }
  const std::vector<Complex> zc{Complex(0.5, 1.0), Complex(-1.0, 0.25)};
  const Matrix direct = zc[0] * a + zc[1] * b + zc[0] * zc[1] * cm;
  CHECK(frobenius_norm(p(zc) - direct) <= 1e-13);
}

TEST_CASE("construction checks") {
  CHECK_THROWS_AS(ArrayPolynomial(std::nullopt, {{0}, {0}}, {rnd(1), rnd(2)}), ShapeError);
  CHECK_THROWS_AS(ArrayPolynomial(std::nullopt, {{0}}, {rnd(1), rnd(2)}), ShapeError);
  CHECK_THROWS_AS(ArrayPolynomial(std::nullopt, {{0}, {1}}, {rnd(1, 2), rnd(2, 3)}), ShapeError);
}

TEST_CASE("products") {
  const Matrix a = rnd(8), b = rnd(9);
  const ArrayPolynomial one(identity(3), {}, {});
  const ArrayPolynomial pa(std::nullopt, {{0}, {0, 1}}, {a, b});
  const auto same = poly_mul(pa, one);
  CHECK(same.labels() == pa.labels());
  CHECK(*same.find({0}) == a);
  CHECK(*same.find({0, 1}) == b);
  const auto dropped = poly_mul(pa, one, [](const Multiset& m) { return m.size() <= 1; });
  CHECK(dropped.size() == 1);

  const auto ab = poly_mul(ArrayPolynomial(std::nullopt, {{0}}, {a}), ArrayPolynomial(std::nullopt, {{0}}, {b}));
  REQUIRE(ab.size() == 1);
  CHECK(ab.labels()[0] == Multiset{0, 0});
  CHECK(frobenius_norm(*ab.find({0, 0}) - a * b) <= 1e-14);

  const ArrayPolynomial q(identity(3), {{0}}, {a});
  const auto sq = poly_mul(q, q, [](const Multiset& m) { return m.size() <= 1; });
  CHECK(sq.size() == 1);
  CHECK(frobenius_norm(*sq.constant() - identity(3)) == 0.0);
  CHECK(frobenius_norm(*sq.find({0}) - 2.0 * a) <= 1e-14);
  CHECK(sq.find({0, 0}) == nullptr);
}

TEST_CASE("product evaluates to the product of evaluations") {
  const ArrayPolynomial p(rnd(10), {{0}, {1}, {0, 1}}, {rnd(11), rnd(12), rnd(13)});
  const ArrayPolynomial q(std::nullopt, {{1}, {0, 0}}, {rnd(14), rnd(15)});
  const std::vector<double> c{0.3, -0.7};
  CHECK(frobenius_norm(poly_mul(p, q)(c) - p(c) * q(c)) <= 1e-12);
  CHECK(frobenius_norm(poly_add(p, q)(c) - (p(c) + q(c))) <= 1e-13);
  CHECK(frobenius_norm(poly_scale(p, Complex(0, 2))(c) - Complex(0, 2) * p(c)) <= 1e-13);
}

TEST_CASE("linear maps act per coefficient") {
  const ArrayPolynomial p(rnd(20), {{0}, {1}}, {identity(3), rnd(21)});
  const auto tr = poly_trace(p);
  CHECK(tr.rows() == 1);
  CHECK(tr.find({0})->value() == Complex(3.0));
  const auto back = poly_conj(poly_conj(p));
  CHECK(*back.find({1}) == *p.find({1}));
  CHECK(*back.constant() == *p.constant());
  CHECK(*poly_adjoint(p).find({1}) == p.find({1})->adjoint());
  CHECK(poly_sum_entries(p).find({0})->value() == Complex(3.0));

  const auto cols = poly_restrict_columns(p, 0, 2);
  CHECK(cols.cols() == 2);
  for (const auto& l : p.labels()) {
    CHECK(frobenius_norm(*cols.find(l)) == doctest::Approx(frobenius_norm(p.find(l)->leftCols(2))));
  }
}

TEST_CASE("truncation and arity") {
  const ArrayPolynomial p(std::nullopt, {{0}, {3}, {0, 3}, {1, 1, 1}}, {rnd(1), rnd(2), rnd(3), rnd(4)});
  CHECK(p.arity() == 4);
  CHECK(p.truncated(1).size() == 2);
  CHECK(p.truncated(2).size() == 3);
  CHECK(p.truncated(3).size() == 4);
}
