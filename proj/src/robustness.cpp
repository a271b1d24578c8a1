#include "perturbdyn/robustness.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <unordered_map>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "perturbdyn/error.hpp"

namespace perturbdyn {

bool even_multiplicities(const Multiset& label) {
  const auto& e = label.elements();
  std::size_t i = 0;
  while (i < e.size()) {
    std::size_t j = i;
    while (j < e.size() && e[j] == e[i]) ++j;
    if ((j - i) % 2 != 0) return false;
    i = j;
  }
  return true;
}

namespace {

// int_{-b}^{b} x^k N(x; 0, sigma^2) dx for even k.
double truncated_gaussian_moment(int k, double sigma, double bound) {
  using boost::math::quadrature::gauss_kronrod;
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  auto density = [=](double x) {
    const double z = x / sigma;
    return std::pow(x, k) * norm * std::exp(-0.5 * z * z);
  };
  return 2.0 * gauss_kronrod<double, 61>::integrate(density, 0.0, bound, 20, 1e-15);
}

}  // namespace

std::vector<Moment> gaussian_moments(const std::vector<Multiset>& labels,
                                     const std::vector<double>& sigmas,
                                     const std::vector<double>& bounds) {
  if (sigmas.size() != bounds.size()) {
    throw ConfigError("gaussian_moments: sigmas and bounds differ in length");
  }
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (!(sigmas[i] > 0.0) || !(bounds[i] > 0.0)) {
      throw ConfigError("gaussian_moments: sigma and bound must be positive for variable " +
                        std::to_string(i));
    }
  }
  std::map<std::pair<int, int>, double> cache;
  std::vector<Moment> out;
  out.reserve(labels.size());
  for (const auto& label : labels) {
    if (label.alphabet_size() > static_cast<int>(sigmas.size())) {
      throw ConfigError("gaussian_moments: label " + label.to_string() +
                        " uses a variable without a sigma");
    }
    if (!even_multiplicities(label)) {
      out.push_back({label, 0.0});
      continue;
    }
    double value = 1.0;
    const auto counts = label.counts(label.alphabet_size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const int k = counts[i];
      if (k == 0) continue;
      auto key = std::make_pair(static_cast<int>(i), k);
      auto it = cache.find(key);
      if (it == cache.end()) {
        it = cache.emplace(key, truncated_gaussian_moment(k, sigmas[i], bounds[i])).first;
      }
      value *= it->second;
    }
    out.push_back({label, value});
  }
  return out;
}

RobustnessResult robustness_objective(const ArrayPolynomial& magnus, const Matrix& projector,
                                      const std::vector<Moment>& moments) {
  require_square(projector, "projector");
  if (magnus.size() == 0 && !magnus.constant()) return {};
  if (magnus.cols() != projector.rows()) {
    throw ShapeError("robustness_objective: projector does not match the expansion shape");
  }
  const double rank = projector.trace().real();
  if (!(rank > 0.5)) throw ConfigError("robustness_objective: projector has zero rank");

  const ArrayPolynomial nontrivial = magnus.map([&](const Matrix& m) -> Matrix {
    const Matrix mp = m * projector;
    return mp - (mp.trace() / rank) * projector;
  });
  const ArrayPolynomial h = poly_trace(
      poly_mul(poly_adjoint(nontrivial), nontrivial,
               [](const Multiset& l) { return l.empty() || even_multiplicities(l); }));

  std::unordered_map<Multiset, double, MultisetHash> moment_of;
  for (const auto& m : moments) moment_of[m.label] = m.value;

  RobustnessResult out;
  if (h.constant()) out.value += (*h.constant())(0, 0).real();
  for (std::size_t k = 0; k < h.size(); ++k) {
    const Multiset& label = h.labels()[k];
    auto it = moment_of.find(label);
    if (it == moment_of.end()) {
      throw ConfigError("robustness_objective: no moment supplied for monomial " + label.to_string());
    }
    const double hv = h.coefficients()[k](0, 0).real();
    out.terms.push_back({label, hv, it->second});
    out.value += it->second * hv;
  }
  return out;
}

}  // namespace perturbdyn
