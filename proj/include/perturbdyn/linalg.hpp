#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace perturbdyn {

using Complex = std::complex<double>;

/// Dense complex matrix; the representation of every operator in the library.
using Matrix = Eigen::MatrixXcd;

/// Dense complex column vector.
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

Matrix identity(Eigen::Index d);
Matrix zeros(Eigen::Index rows, Eigen::Index cols);

/// Product a * b; throws ShapeError if a.cols() != b.rows().
Matrix matmul(const Matrix& a, const Matrix& b);

/// Matrix exponential by Pade approximation with scaling and squaring.
/// The Pade degree (3, 5, 7, 9 or 13) and the number of squarings are chosen
/// from the 1-norm using the degree-13 backward-error thresholds.
Matrix expm(const Matrix& a);

/// Solves a * x = b with LU and partial pivoting. Throws SolverError when the
/// reciprocal condition estimate of `a` drops below 1e-12.
Matrix solve_linear(const Matrix& a, const Matrix& b);

double frobenius_norm(const Matrix& a);
Complex trace(const Matrix& a);
double one_norm(const Matrix& a);

/// Kronecker product a (x) b.
Matrix kron(const Matrix& a, const Matrix& b);

/// ||a - b||_F / sqrt(d), the solution-distance metric.
double distance(const Matrix& a, const Matrix& b);

bool all_finite(const Matrix& a);

/// Throws ShapeError unless `a` is square.
void require_square(const Matrix& a, const char* what);

}  // namespace perturbdyn
