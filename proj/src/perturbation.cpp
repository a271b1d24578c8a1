#include "perturbdyn/perturbation.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "perturbdyn/error.hpp"

namespace perturbdyn {

namespace {

Eigen::Index infer_dimension(const PerturbationProblem& p) {
  if (p.dim > 0) return p.dim;
  if (p.frame_generator) return p.frame_generator(p.t0).rows();
  if (!p.perturbations.empty()) return p.perturbations.front().op(p.t0).rows();
  throw ConfigError("cannot infer the operator dimension: no frame generator, no perturbations "
                    "and no explicit dimension");
}

void check_operator(const Matrix& m, Eigen::Index d, const char* what, double t) {
  if (m.rows() != d || m.cols() != d) {
    throw ShapeError(std::string(what) + " at t = " + std::to_string(t) + " is " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                     std::to_string(d) + "x" + std::to_string(d));
  }
}

// For label I, every G_J with J a submultiset of I contributes G_J times the
// block holding E_{I \ J} (or V when J == I).
struct Coupling {
  std::size_t perturbation;
  Eigen::Index source_block;
};

}  // namespace

std::ptrdiff_t PerturbationResult::find(const Multiset& label) const {
  auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label) return -1;
  return it - labels.begin();
}

const Matrix& PerturbationResult::term(const Multiset& label) const {
  const auto k = find(label);
  if (k < 0) throw ConfigError("no term for label " + label.to_string());
  return terms[static_cast<std::size_t>(k)];
}

ArrayPolynomial PerturbationResult::polynomial() const {
  return ArrayPolynomial(std::nullopt, labels, terms);
}

PerturbationResult compute_dyson_terms(const PerturbationProblem& p) {
  const Eigen::Index d = infer_dimension(p);
  PerturbationResult result;
  result.expansion = Expansion::Dyson;
  result.labels = complete(p.requested);
  const auto& labels = result.labels;
  const auto m = static_cast<Eigen::Index>(labels.size());

  std::unordered_map<Multiset, Eigen::Index, MultisetHash> block_of;
  for (Eigen::Index k = 0; k < m; ++k) block_of.emplace(labels[static_cast<std::size_t>(k)], k + 1);

  // Only perturbations whose label lies in the completion can contribute.
  std::vector<std::size_t> active;
  for (std::size_t q = 0; q < p.perturbations.size(); ++q) {
    if (block_of.contains(p.perturbations[q].label)) active.push_back(q);
  }
  std::vector<std::vector<Coupling>> couplings(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) {
    for (std::size_t q : active) {
      const Multiset& j = p.perturbations[q].label;
      if (j == labels[k]) {
        couplings[k].push_back({q, 0});
      } else if (labels[k].contains(j)) {
        couplings[k].push_back({q, block_of.at(labels[k].minus(j))});
      }
    }
  }

  std::vector<Matrix> g(p.perturbations.size());
  Matrix g0;
  // Coefficient-based products beat the blocked kernel at these sizes.
  const bool small = d <= 12;
  auto rhs = [&](double t, const Matrix& y, Matrix& dy) {
    for (std::size_t q : active) {
      g[q] = p.perturbations[q].op(t);
      check_operator(g[q], d, "perturbation operator", t);
    }
    if (p.frame_generator) {
      g0 = p.frame_generator(t);
      check_operator(g0, d, "frame generator", t);
      if (small) {
        dy.noalias() = g0.lazyProduct(y);
      } else {
        dy.noalias() = g0 * y;
      }
    } else {
      dy.setZero();
    }
    for (std::size_t k = 0; k < labels.size(); ++k) {
      auto out = dy.middleCols((static_cast<Eigen::Index>(k) + 1) * d, d);
      for (const auto& c : couplings[k]) {
        const auto src = y.middleCols(c.source_block * d, d);
        if (small) {
          out.noalias() += g[c.perturbation].lazyProduct(src);
        } else {
          out.noalias() += g[c.perturbation] * src;
        }
      }
    }
  };

  OdeProblem ode;
  ode.rhs = rhs;
  ode.t0 = p.t0;
  ode.tf = p.tf;
  ode.y0 = Matrix::Zero(d, d * (m + 1));
  ode.y0.leftCols(d).setIdentity();
  const OdeSolution sol = integrate(std::move(ode), p.integration);
  result.n_steps = sol.n_steps;

  result.frame_solution = sol.y_final.leftCols(d);
  Matrix blocks = sol.y_final.rightCols(d * m);
  if (p.remove_frame && m > 0) {
    blocks = solve_linear(result.frame_solution, blocks);
  }
  result.frame_removed = p.remove_frame;
  result.terms.reserve(labels.size());
  for (Eigen::Index k = 0; k < m; ++k) result.terms.push_back(blocks.middleCols(k * d, d));
  return result;
}

std::vector<Matrix> magnus_from_dyson(const std::vector<Multiset>& labels,
                                      const std::vector<Matrix>& dyson_terms) {
  if (labels.size() != dyson_terms.size()) {
    throw ShapeError("magnus_from_dyson: label and term counts differ");
  }
  if (!std::is_sorted(labels.begin(), labels.end())) {
    throw ConfigError("magnus_from_dyson: labels must be canonically ordered");
  }
  std::unordered_map<Multiset, std::size_t, MultisetHash> index;
  for (std::size_t k = 0; k < labels.size(); ++k) index.emplace(labels[k], k);

  // q[k][m - 1] holds Q_I^(m) for I = labels[k]; filled in the order
  // (I, |I|), (I, |I| - 1), ..., (I, 1) over canonically sorted I, so every
  // Q_J^(n) used below was produced earlier.
  std::vector<std::vector<Matrix>> q(labels.size());
  double factorial = 1.0;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const Multiset& label = labels[k];
    const int order = static_cast<int>(label.size());
    q[k].resize(static_cast<std::size_t>(order));
    if (order == 1) {
      q[k][0] = dyson_terms[k];
      continue;
    }
    struct Split {
      std::size_t first;
      std::size_t rest;
      int first_size;
    };
    std::vector<Split> splits;
    for (const auto& j : submultisets_proper(label)) {
      auto jt = index.find(j);
      auto rt = index.find(label.minus(j));
      if (jt == index.end() || rt == index.end()) {
        throw ConfigError("magnus_from_dyson: label list is not complete (missing a submultiset "
                          "of " + label.to_string() + ")");
      }
      splits.push_back({jt->second, rt->second, static_cast<int>(j.size())});
    }
    Matrix correction = Matrix::Zero(dyson_terms[k].rows(), dyson_terms[k].cols());
    factorial = 1.0;
    for (int mm = 2; mm <= order; ++mm) factorial *= mm;
    for (int mm = order; mm >= 2; --mm) {
      Matrix acc = Matrix::Zero(dyson_terms[k].rows(), dyson_terms[k].cols());
      for (const auto& s : splits) {
        if (s.first_size > order - (mm - 1)) continue;
        acc.noalias() += q[s.first][0] * q[s.rest][static_cast<std::size_t>(mm - 2)];
      }
      correction += acc / factorial;
      factorial /= mm;
      q[k][static_cast<std::size_t>(mm - 1)] = std::move(acc);
    }
    q[k][0] = dyson_terms[k] - correction;
  }
  std::vector<Matrix> out;
  out.reserve(labels.size());
  for (auto& levels : q) out.push_back(std::move(levels[0]));
  return out;
}

PerturbationResult compute_magnus_terms(const PerturbationProblem& p) {
  PerturbationProblem dyson = p;
  dyson.remove_frame = true;
  PerturbationResult result = compute_dyson_terms(dyson);
  result.terms = magnus_from_dyson(result.labels, result.terms);
  result.expansion = Expansion::Magnus;
  result.frame_removed = true;
  return result;
}

PerturbationResult compute_perturbation_terms(const PerturbationProblem& p) {
  return p.expansion == Expansion::Magnus ? compute_magnus_terms(p) : compute_dyson_terms(p);
}

}  // namespace perturbdyn
