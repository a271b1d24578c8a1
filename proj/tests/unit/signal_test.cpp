#include <cmath>
#include <numbers>

#include "doctest.h"
#include "perturbdyn/signal.hpp"

using namespace perturbdyn;

TEST_CASE("signal samples") {
  Signal s{[](double) { return Complex(1.0); }, 0.0, 0.0};
  CHECK(sample_signal(s, 0.37) == 1.0);
  s.carrier_freq = 1.0;
  CHECK(std::abs(sample_signal(s, 0.25)) <= 1e-16);
  Signal im{[](double) { return Complex(0.0, 1.0); }, 0.0, 0.0};
  for (double t : {0.0, 0.3, 1.7}) CHECK(sample_signal(im, t) == 0.0);

  Signal g{[](double t) { return Complex(std::cos(t), 0.5 * t); }, 2.3, 0.4};
  for (double t : {0.0, 0.11, 0.9}) {
    const Complex direct = g.envelope(t) * std::exp(Complex(0, 2 * std::numbers::pi * 2.3 * t + 0.4));
    CHECK(g(t) == doctest::Approx(direct.real()).epsilon(1e-14));
  }
}

TEST_CASE("carrier shift preserves values") {
  Signal same{[](double) { return Complex(1.0); }, 3.0, 0.7};
  const Signal shifted_same = shift_carrier(same, 3.0);
  CHECK(shifted_same.carrier_freq == 3.0);
  CHECK(std::abs(shifted_same.envelope(0.4) - std::polar(1.0, 0.7)) <= 1e-15);

  Signal five{[](double) { return Complex(1.0); }, 5.0, 0.0};
  const Signal to_zero = shift_carrier(five, 0.0);
  for (double t : {0.01, 0.2, 0.33}) {
    CHECK(std::abs(to_zero.envelope(t) - std::polar(1.0, 2 * std::numbers::pi * 5.0 * t)) <= 1e-13);
  }

  Signal g{[](double t) { return Complex(std::sin(3 * t) + 0.2, std::cos(t * t)); }, 4.9, -0.3};
  const Signal h = shift_carrier(g, 5.1);
  double worst = 0.0;
  for (int k = 0; k <= 2000; ++k) {
    const double t = 0.005 * k;
    worst = std::max(worst, std::abs(g(t) - h(t)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("piecewise constant envelope") {
  PiecewiseConstantEnvelope env{0.5, 1.0, {Complex(1, 0), Complex(0, 2), Complex(-3, 0)}};
  CHECK(env(0.99) == Complex(0.0));
  CHECK(env(1.0) == Complex(1.0));
  CHECK(env(1.6) == Complex(0, 2));
  CHECK(env(2.49) == Complex(-3.0));
  CHECK(env(2.5) == Complex(0.0));
  CHECK(env.t_end() == 2.5);
  CHECK(env.edges() == std::vector<double>{1.0, 1.5, 2.0, 2.5});
}

TEST_CASE("Chebyshev fits") {
  const double t0 = 0.3, w = 0.2;
  auto x_of = [&](double t) { return 2.0 * (t - t0) / w - 1.0; };

  const auto c = chebyshev_fit([](double) { return Complex(2.0, -1.0); }, t0, w, 3);
  REQUIRE(c.coeffs.size() == 4);
  CHECK(std::abs(c.coeffs[0] - Complex(2.0, -1.0)) <= 1e-14);
  for (int m = 1; m < 4; ++m) CHECK(std::abs(c.coeffs[m]) <= 1e-14);

  const auto lin = chebyshev_fit([&](double t) { return Complex(x_of(t)); }, t0, w, 1);
  CHECK(std::abs(lin.coeffs[0]) <= 1e-14);
  CHECK(std::abs(lin.coeffs[1] - 1.0) <= 1e-14);

  const auto quad = chebyshev_fit([&](double t) { return Complex(x_of(t) * x_of(t)); }, t0, w, 2);
  CHECK(std::abs(quad.coeffs[0] - 0.5) <= 1e-14);
  CHECK(std::abs(quad.coeffs[1]) <= 1e-14);
  CHECK(std::abs(quad.coeffs[2] - 0.5) <= 1e-14);

  // Polynomials of degree <= order are reproduced everywhere.
  auto cubic = [&](double t) {
    const double x = x_of(t);
    return Complex(1.0 - 2.0 * x + 0.5 * x * x * x, x * x);
  };
  const auto fit = chebyshev_fit(cubic, t0, w, 3);
  for (int k = 0; k <= 50; ++k) {
    const double t = t0 + w * k / 50.0;
    CHECK(std::abs(fit(t) - cubic(t)) <= 1e-12);
  }

  // Interpolation at the Chebyshev-Gauss nodes.
  auto smooth = [](double t) { return Complex(std::exp(t), std::sin(5 * t)); };
  const int order = 4;
  const auto f = chebyshev_fit(smooth, t0, w, order);
  for (int k = 0; k <= order; ++k) {
    const double x = std::cos(std::numbers::pi * (k + 0.5) / (order + 1));
    const double t = t0 + 0.5 * (x + 1.0) * w;
    CHECK(std::abs(f(t) - smooth(t)) <= 1e-12 * std::abs(smooth(t)));
  }
}

TEST_CASE("Chebyshev values follow the recurrence") {
  const double x = 0.37;
  const auto v = chebyshev_values(x, 5);
  REQUIRE(v.size() == 6);
  for (int m = 0; m <= 5; ++m) CHECK(v[m] == doctest::Approx(std::cos(m * std::acos(x))).epsilon(1e-14));
}
