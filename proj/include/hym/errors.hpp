#pragma once

#include <stdexcept>
#include <string>

namespace hym {

/// Bad input or configuration (CLI exit status 1).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure of a solver (CLI exit status 2).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The mesh cannot resolve the boundary layer for the requested epsilon.
class ResolutionError : public SolverError {
 public:
  using SolverError::SolverError;
};

class NonConvergenceError : public SolverError {
 public:
  NonConvergenceError(const std::string& what, double last_residual)
      : SolverError(what + " (last residual " + std::to_string(last_residual) + ")"),
        last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

/// Evaluation exactly at a logarithmic singularity.
class PoleError : public std::domain_error {
 public:
  PoleError(const std::string& what, int index, int sign)
      : std::domain_error(what), index_(index), sign_(sign) {}
  int index() const { return index_; }
  /// +1 if the field diverges to +infinity there, -1 for -infinity.
  int sign() const { return sign_; }

 private:
  int index_;
  int sign_;
};

}  // namespace hym
