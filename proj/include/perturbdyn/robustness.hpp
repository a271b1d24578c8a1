#pragma once

#include <vector>

#include "perturbdyn/array_polynomial.hpp"
#include "perturbdyn/multiset.hpp"

namespace perturbdyn {

struct Moment {
  Multiset label;
  double value = 0.0;
};

/// Moments E[c_I] of a product of independent zero-mean Gaussians restricted
/// to the box |c_i| <= bounds[i]. Labels with an odd multiplicity get exactly
/// zero; the rest are products of 1-D moments by adaptive quadrature.
std::vector<Moment> gaussian_moments(const std::vector<Multiset>& labels,
                                     const std::vector<double>& sigmas,
                                     const std::vector<double>& bounds);

/// True when every index of `label` occurs an even number of times.
bool even_multiplicities(const Multiset& label);

struct RobustnessTerm {
  Multiset label;
  double h = 0.0;
  double moment = 0.0;
};

struct RobustnessResult {
  double value = 0.0;
  std::vector<RobustnessTerm> terms;
};

/// g = sum_I m_I h_I where h(c) = ||X(c) P - (Tr(X(c) P) / rank P) P||_F^2
/// for the polynomial X(c) = magnus(c). Monomials with odd multiplicity are
/// dropped; any other surviving monomial must have a moment, otherwise
/// ConfigError.
RobustnessResult robustness_objective(const ArrayPolynomial& magnus, const Matrix& projector,
                                      const std::vector<Moment>& moments);

}  // namespace perturbdyn
