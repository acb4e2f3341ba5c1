#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qipm {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Iterate with a nonpositive x or s component where an interior point is required.
class InvalidIterateError : public Error {
 public:
  using Error::Error;
};

class RankDeficientError : public Error {
 public:
  RankDeficientError(const std::string& what, std::vector<int> dependent_rows)
      : Error(what), dependent_rows_(std::move(dependent_rows)) {}
  const std::vector<int>& dependent_rows() const { return dependent_rows_; }

 private:
  std::vector<int> dependent_rows_;
};

class FactorizationError : public Error {
 public:
  using Error::Error;
};

/// An iterative or sampled solve could not meet its residual target.
/// Carries the best iterate found so callers can inspect it.
class ResidualNotMetError : public Error {
 public:
  ResidualNotMetError(const std::string& what, Eigen::VectorXd best, double best_residual)
      : Error(what), best_(std::move(best)), best_residual_(best_residual) {}
  const Eigen::VectorXd& best() const { return best_; }
  double best_residual() const { return best_residual_; }

 private:
  Eigen::VectorXd best_;
  double best_residual_;
};

/// No admissible step length above the search floor.
class StepFailureError : public Error {
 public:
  using Error::Error;
};

class NonIntegerDataError : public Error {
 public:
  using Error::Error;
};

/// Quantum simulation exceeds the qubit / dimension budget.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Eigenvalue too small to be resolved by the clock register, or kappa outside the sizing table.
class ConditionError : public Error {
 public:
  using Error::Error;
};

class ZeroSolutionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFeatureError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qipm
