#pragma once

#include <stdexcept>
#include <string>

namespace perturbdyn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions are incompatible.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Too few variables supplied to a polynomial evaluation.
class ArityError : public Error {
 public:
  using Error::Error;
};

/// Linear solve failed; carries the reciprocal condition estimate.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// The integrated state stopped being finite.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double t) : Error(what), t_(t) {}
  double time() const noexcept { return t_; }

 private:
  double t_;
};

/// Adaptive step size collapsed below the admissible minimum.
class StiffnessError : public Error {
 public:
  StiffnessError(const std::string& what, double t) : Error(what), t_(t) {}
  double time() const noexcept { return t_; }

 private:
  double t_;
};

/// Invalid user configuration (bad keys, missing moments, bad parameters).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace perturbdyn
