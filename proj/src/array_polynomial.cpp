#include "perturbdyn/array_polynomial.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "perturbdyn/error.hpp"

namespace perturbdyn {

ArrayPolynomial::ArrayPolynomial(std::optional<Matrix> constant, std::vector<Multiset> labels,
                                 std::vector<Matrix> coefficients)
    : constant_(std::move(constant)), labels_(std::move(labels)), coeffs_(std::move(coefficients)) {
  if (labels_.size() != coeffs_.size()) {
    throw ShapeError("ArrayPolynomial: " + std::to_string(labels_.size()) + " labels but " +
                     std::to_string(coeffs_.size()) + " coefficients");
  }
  if (constant_) {
    rows_ = constant_->rows();
    cols_ = constant_->cols();
  } else if (!coeffs_.empty()) {
    rows_ = coeffs_.front().rows();
    cols_ = coeffs_.front().cols();
  }
  for (const auto& m : coeffs_) {
    if (m.rows() != rows_ || m.cols() != cols_) {
      throw ShapeError("ArrayPolynomial: coefficients do not share one shape");
    }
  }
  index_labels();
}

void ArrayPolynomial::index_labels() {
  index_.clear();
  index_.reserve(labels_.size());
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    if (labels_[k].empty()) throw ShapeError("ArrayPolynomial: empty monomial label");
    if (!index_.emplace(labels_[k], k).second) {
      throw ShapeError("ArrayPolynomial: duplicate monomial " + labels_[k].to_string());
    }
  }
}

const Matrix* ArrayPolynomial::find(const Multiset& label) const {
  auto it = index_.find(label);
  return it == index_.end() ? nullptr : &coeffs_[it->second];
}

int ArrayPolynomial::arity() const noexcept {
  int r = 0;
  for (const auto& l : labels_) r = std::max(r, l.alphabet_size());
  return r;
}

namespace {

template <class Scalar>
Matrix evaluate(const ArrayPolynomial& p, std::span<const Scalar> c) {
  if (static_cast<int>(c.size()) < p.arity()) {
    throw ArityError("polynomial needs " + std::to_string(p.arity()) + " variables, got " +
                     std::to_string(c.size()));
  }
  Matrix out = p.constant() ? *p.constant() : Matrix::Zero(p.rows(), p.cols());
  const auto& labels = p.labels();
  const auto& coeffs = p.coefficients();
  for (std::size_t k = 0; k < labels.size(); ++k) {
    Complex mono{1.0, 0.0};
    for (int i : labels[k].elements()) mono *= c[static_cast<std::size_t>(i)];
    if (mono != Complex{}) out += mono * coeffs[k];
  }
  return out;
}

ArrayPolynomial from_map(std::optional<Matrix> constant, std::map<Multiset, Matrix>&& terms) {
  std::vector<Multiset> labels;
  std::vector<Matrix> coeffs;
  labels.reserve(terms.size());
  coeffs.reserve(terms.size());
  for (auto& [label, m] : terms) {
    labels.push_back(label);
    coeffs.push_back(std::move(m));
  }
  return ArrayPolynomial(std::move(constant), std::move(labels), std::move(coeffs));
}

void accumulate(std::map<Multiset, Matrix>& terms, const Multiset& label, Matrix&& m) {
  auto it = terms.find(label);
  if (it == terms.end()) {
    terms.emplace(label, std::move(m));
  } else {
    it->second += m;
  }
}

}  // namespace

Matrix ArrayPolynomial::operator()(std::span<const Complex> c) const { return evaluate(*this, c); }

Matrix ArrayPolynomial::operator()(std::span<const double> c) const { return evaluate(*this, c); }

ArrayPolynomial ArrayPolynomial::truncated(int order) const {
  std::vector<Multiset> labels;
  std::vector<Matrix> coeffs;
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    if (static_cast<int>(labels_[k].size()) <= order) {
      labels.push_back(labels_[k]);
      coeffs.push_back(coeffs_[k]);
    }
  }
  return ArrayPolynomial(constant_, std::move(labels), std::move(coeffs));
}

ArrayPolynomial ArrayPolynomial::map(const std::function<Matrix(const Matrix&)>& f) const {
  std::optional<Matrix> constant;
  if (constant_) constant = f(*constant_);
  std::vector<Matrix> coeffs;
  coeffs.reserve(coeffs_.size());
  for (const auto& m : coeffs_) coeffs.push_back(f(m));
  return ArrayPolynomial(std::move(constant), labels_, std::move(coeffs));
}

Matrix poly_eval(const ArrayPolynomial& p, std::span<const Complex> c) { return p(c); }

Matrix poly_eval(const ArrayPolynomial& p, std::span<const double> c) { return p(c); }

ArrayPolynomial poly_mul(const ArrayPolynomial& a, const ArrayPolynomial& b,
                         const MonomialFilter& keep) {
  if (a.cols() != b.rows() && (a.cols() != 0 || b.rows() != 0)) {
    throw ShapeError("poly_mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  auto kept = [&](const Multiset& m) { return !keep || keep(m); };
  std::optional<Matrix> constant;
  std::map<Multiset, Matrix> terms;
  if (a.constant() && b.constant() && kept(Multiset{})) {
    constant = (*a.constant()) * (*b.constant());
  }
  if (a.constant()) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (kept(b.labels()[j])) accumulate(terms, b.labels()[j], (*a.constant()) * b.coefficients()[j]);
    }
  }
  if (b.constant()) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (kept(a.labels()[i])) accumulate(terms, a.labels()[i], a.coefficients()[i] * (*b.constant()));
    }
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      Multiset label = msum(a.labels()[i], b.labels()[j]);
      if (!kept(label)) continue;
      accumulate(terms, label, a.coefficients()[i] * b.coefficients()[j]);
    }
  }
  ArrayPolynomial out = from_map(std::move(constant), std::move(terms));
  if (out.size() == 0 && !out.constant()) {
    // Keep the product shape even when every monomial was filtered out.
    return ArrayPolynomial(Matrix::Zero(a.rows(), b.cols()), {}, {});
  }
  return out;
}

ArrayPolynomial poly_add(const ArrayPolynomial& a, const ArrayPolynomial& b) {
  const bool a_empty = a.size() == 0 && !a.constant();
  const bool b_empty = b.size() == 0 && !b.constant();
  if (!a_empty && !b_empty && (a.rows() != b.rows() || a.cols() != b.cols())) {
    throw ShapeError("poly_add: shape mismatch");
  }
  std::optional<Matrix> constant;
  if (a.constant() && b.constant()) {
    constant = *a.constant() + *b.constant();
  } else if (a.constant()) {
    constant = a.constant();
  } else if (b.constant()) {
    constant = b.constant();
  }
  std::map<Multiset, Matrix> terms;
  for (std::size_t i = 0; i < a.size(); ++i) accumulate(terms, a.labels()[i], Matrix(a.coefficients()[i]));
  for (std::size_t j = 0; j < b.size(); ++j) accumulate(terms, b.labels()[j], Matrix(b.coefficients()[j]));
  return from_map(std::move(constant), std::move(terms));
}

ArrayPolynomial poly_scale(const ArrayPolynomial& p, Complex factor) {
  return p.map([factor](const Matrix& m) -> Matrix { return factor * m; });
}

ArrayPolynomial poly_conj(const ArrayPolynomial& p) {
  return p.map([](const Matrix& m) -> Matrix { return m.conjugate(); });
}

ArrayPolynomial poly_adjoint(const ArrayPolynomial& p) {
  return p.map([](const Matrix& m) -> Matrix { return m.adjoint(); });
}

ArrayPolynomial poly_trace(const ArrayPolynomial& p) {
  if (p.rows() != p.cols()) throw ShapeError("poly_trace: coefficients are not square");
  return p.map([](const Matrix& m) -> Matrix { return Matrix::Constant(1, 1, m.trace()); });
}

ArrayPolynomial poly_sum_entries(const ArrayPolynomial& p) {
  return p.map([](const Matrix& m) -> Matrix { return Matrix::Constant(1, 1, m.sum()); });
}

ArrayPolynomial poly_restrict_columns(const ArrayPolynomial& p, Eigen::Index first,
                                      Eigen::Index count) {
  if (first < 0 || count < 0 || first + count > p.cols()) {
    throw ShapeError("poly_restrict_columns: column range outside the coefficient shape");
  }
  return p.map([first, count](const Matrix& m) -> Matrix { return m.middleCols(first, count); });
}

}  // namespace perturbdyn
