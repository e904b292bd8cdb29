#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace qtomo {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// Tolerances shared across modules.
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kClosureTolerance = 1e-8;

/// Base class for all errors raised by the library.  `kind()` is a short
/// machine-readable tag used by the CLI's error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error("dimension_mismatch", what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("invalid_argument", what) {}
};

class InvalidState : public Error {
 public:
  explicit InvalidState(const std::string& what) : Error("invalid_state", what) {}
};

class ClosureError : public Error {
 public:
  ClosureError(const std::string& what, double residual)
      : Error("closure_violation", what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class UnsupportedDimension : public Error {
 public:
  explicit UnsupportedDimension(const std::string& what)
      : Error("unsupported_dimension", what) {}
};

class ClassificationError : public Error {
 public:
  ClassificationError(const std::string& what, int expected_gauge, int found_gauge)
      : Error("spectrum_classification", what),
        expected_(expected_gauge),
        found_(found_gauge) {}
  int expected_gauge() const noexcept { return expected_; }
  int found_gauge() const noexcept { return found_; }

 private:
  int expected_;
  int found_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace qtomo
