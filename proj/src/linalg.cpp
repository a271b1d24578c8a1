#include "perturbdyn/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "perturbdyn/error.hpp"

namespace perturbdyn {

Matrix identity(Eigen::Index d) { return Matrix::Identity(d, d); }

Matrix zeros(Eigen::Index rows, Eigen::Index cols) { return Matrix::Zero(rows, cols); }

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw ShapeError(std::string(what) + ": expected a square matrix, got " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  return a * b;
}

double one_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

namespace {

// Backward-error thresholds for Pade degrees 3, 5, 7, 9 and 13.
constexpr std::array<double, 5> kTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                          9.504178996162932e-1, 2.097847961257068e0,
                                          5.371920351148152e0};

Matrix pade_small(const Matrix& a, int degree) {
  static constexpr std::array<double, 4> b3 = {120., 60., 12., 1.};
  static constexpr std::array<double, 6> b5 = {30240., 15120., 3360., 420., 30., 1.};
  static constexpr std::array<double, 8> b7 = {17297280., 8648640., 1995840., 277200.,
                                               25200.,    1512.,    56.,      1.};
  static constexpr std::array<double, 10> b9 = {17643225600., 8821612800., 2075673600.,
                                                302702400.,   30270240.,   2162160.,
                                                110880.,      3960.,       90.,
                                                1.};
  const double* b = nullptr;
  switch (degree) {
    case 3: b = b3.data(); break;
    case 5: b = b5.data(); break;
    case 7: b = b7.data(); break;
    default: b = b9.data(); break;
  }
  const Eigen::Index n = a.rows();
  const Matrix eye = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix power = eye;  // a^(2k)
  Matrix u_inner = b[1] * eye;
  Matrix v = b[0] * eye;
  for (int k = 1; 2 * k <= degree; ++k) {
    power = power * a2;
    v += b[2 * k] * power;
    u_inner += b[2 * k + 1] * power;
  }
  const Matrix u = a * u_inner;
  return (v - u).partialPivLu().solve(v + u);
}

Matrix pade13(const Matrix& a) {
  static constexpr std::array<double, 14> b = {
      64764752532480000., 32382376266240000., 7771770303897600., 1187353796428800.,
      129060195264000.,   10559470521600.,    670442572800.,     33522128640.,
      1323241920.,        40840800.,          960960.,           16380.,
      182.,               1.};
  const Eigen::Index n = a.rows();
  const Matrix eye = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  Matrix u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  u += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * eye;
  u = (a * u).eval();
  Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

Matrix expm(const Matrix& a) {
  require_square(a, "expm");
  if (a.size() == 0) return a;
  if (!all_finite(a)) throw DivergenceError("expm: non-finite input", 0.0);
  const double norm = one_norm(a);
  constexpr std::array<int, 4> small_degrees = {3, 5, 7, 9};
  for (std::size_t k = 0; k < small_degrees.size(); ++k) {
    if (norm <= kTheta[k]) return pade_small(a, small_degrees[k]);
  }
  int squarings = 0;
  if (norm > kTheta[4]) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta[4])));
    squarings = std::max(squarings, 0);
  }
  Matrix r = pade13(a / std::ldexp(1.0, squarings));
  for (int k = 0; k < squarings; ++k) r = (r * r).eval();
  return r;
}

Matrix solve_linear(const Matrix& a, const Matrix& b) {
  require_square(a, "solve_linear");
  if (a.rows() != b.rows()) {
    throw ShapeError("solve_linear: right-hand side has " + std::to_string(b.rows()) +
                     " rows, expected " + std::to_string(a.rows()));
  }
  Eigen::PartialPivLU<Matrix> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond >= 1e-12)) {
    throw SolverError("solve_linear: matrix is singular or ill-conditioned (rcond = " +
                          std::to_string(rcond) + ")",
                      rcond);
  }
  return lu.solve(b);
}

double frobenius_norm(const Matrix& a) { return a.norm(); }

Complex trace(const Matrix& a) {
  require_square(a, "trace");
  return a.trace();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("distance: shape mismatch");
  return (a - b).norm() / std::sqrt(static_cast<double>(a.rows()));
}

bool all_finite(const Matrix& a) { return a.allFinite(); }

}  // namespace perturbdyn
