#pragma once

#include <cstdint>
#include <vector>

#include "perturbdyn/perturbation.hpp"

namespace perturbdyn::testing {

/// Random Hermitian d x d matrix with entries of order `scale`.
Matrix random_hermitian(std::uint64_t seed, Eigen::Index d, double scale);

/// Seeded 2x2 anti-Hermitian problem over [0, 1] in two variables with smooth
/// trigonometric time dependence. Carries terms for (0), (1) and (0, 1).
PerturbationProblem random_two_level_problem(std::uint64_t seed);

/// G(t, c) = G_0(t) + sum_I c_I G_I(t) for a given c.
MatrixFunction full_generator(const PerturbationProblem& p, const std::vector<double>& c);

/// Propagator of `g` over [t0, tf] at tight tolerance.
Matrix propagate(const MatrixFunction& g, Eigen::Index d, double t0, double tf,
                 double tol = 1e-12);

}  // namespace perturbdyn::testing
