#pragma once

#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "perturbdyn/linalg.hpp"
#include "perturbdyn/multiset.hpp"

namespace perturbdyn {

/// Matrix-valued multivariable polynomial
///     p(c) = constant + sum_I c_I * coeff_I,
/// with monomials labelled by distinct multisets and coefficients of one
/// common shape. Linear maps act coefficient-wise, including on the constant.
class ArrayPolynomial {
 public:
  ArrayPolynomial() = default;
  ArrayPolynomial(std::optional<Matrix> constant, std::vector<Multiset> labels,
                  std::vector<Matrix> coefficients);

  const std::optional<Matrix>& constant() const noexcept { return constant_; }
  const std::vector<Multiset>& labels() const noexcept { return labels_; }
  const std::vector<Matrix>& coefficients() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return labels_.size(); }

  Eigen::Index rows() const noexcept { return rows_; }
  Eigen::Index cols() const noexcept { return cols_; }

  /// Coefficient of `label`, or nullptr when absent.
  const Matrix* find(const Multiset& label) const;

  /// Number of variables needed to evaluate (largest index + 1).
  int arity() const noexcept;

  Matrix operator()(std::span<const Complex> c) const;
  Matrix operator()(std::span<const double> c) const;

  /// Monomials with |I| <= order (constant kept).
  ArrayPolynomial truncated(int order) const;

  /// Applies `f` to the constant and to every coefficient.
  ArrayPolynomial map(const std::function<Matrix(const Matrix&)>& f) const;

 private:
  void index_labels();

  std::optional<Matrix> constant_;
  std::vector<Multiset> labels_;
  std::vector<Matrix> coeffs_;
  std::unordered_map<Multiset, std::size_t, MultisetHash> index_;
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
};

using MonomialFilter = std::function<bool(const Multiset&)>;

/// Evaluates p at c; throws ArityError when c has fewer entries than p needs.
Matrix poly_eval(const ArrayPolynomial& p, std::span<const Complex> c);
Matrix poly_eval(const ArrayPolynomial& p, std::span<const double> c);

/// Distributed matrix product a(c) * b(c). The pair (I, J) contributes to
/// monomial I + J; monomials rejected by `keep` are dropped. The empty
/// multiset stands for the constant part when passed to `keep`.
ArrayPolynomial poly_mul(const ArrayPolynomial& a, const ArrayPolynomial& b,
                         const MonomialFilter& keep = {});

ArrayPolynomial poly_add(const ArrayPolynomial& a, const ArrayPolynomial& b);
ArrayPolynomial poly_scale(const ArrayPolynomial& p, Complex factor);
ArrayPolynomial poly_conj(const ArrayPolynomial& p);
ArrayPolynomial poly_adjoint(const ArrayPolynomial& p);
/// 1x1 polynomial of coefficient traces.
ArrayPolynomial poly_trace(const ArrayPolynomial& p);
/// 1x1 polynomial of coefficient entry sums.
ArrayPolynomial poly_sum_entries(const ArrayPolynomial& p);
/// Keeps columns [first, first + count).
ArrayPolynomial poly_restrict_columns(const ArrayPolynomial& p, Eigen::Index first,
                                      Eigen::Index count);

}  // namespace perturbdyn
