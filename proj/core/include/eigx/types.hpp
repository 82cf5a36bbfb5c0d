#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace eigx {

using Point = Eigen::Vector2d;
using Vector = Eigen::VectorXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: unknown identifiers, malformed parameters or configs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A precondition on geometric input does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Linear or eigen solver failure.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Factorization hit a (numerically) zero pivot.
class SingularMatrixError : public SolverError {
 public:
  SingularMatrixError(const std::string& what, int pivot)
      : SolverError(what + " (pivot " + std::to_string(pivot) + ")"), pivot_(pivot) {}
  int pivot() const { return pivot_; }

 private:
  int pivot_;
};

/// A scalar field given in closed form. Gradient and Hessian are optional;
/// operations that need them throw when they are absent.
struct ScalarField {
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;
  std::function<Eigen::Matrix2d(const Point&)> hessian;

  bool has_gradient() const { return static_cast<bool>(gradient); }
  bool has_hessian() const { return static_cast<bool>(hessian); }
};

using VectorField = std::function<Point(const Point&)>;

/// An eigenpair of the continuous problem known in closed form, with
/// ||u||_0 = 1.
struct ExactEigenpair {
  double lambda = 0.0;
  ScalarField u;
};

}  // namespace eigx
