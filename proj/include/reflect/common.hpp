#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace reflect {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Numerical tolerances shared across modules.
namespace tol {
inline constexpr double unit_norm = 1e-12;
inline constexpr double inverse = 1e-10;
inline constexpr double positive_definite = 1e-10;  // relative to the largest eigenvalue
inline constexpr double degenerate_vector = 1e-12;
inline constexpr double cone = 1e-9;
inline constexpr double dedup = 1e-8;
}  // namespace tol

inline constexpr int kMaxExplicitOrder = 1000;
inline constexpr std::size_t kDefaultEnumerationCap = 60000;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input the caller should fix (bad syntax, bad ranges, bad shapes).
class UsageError : public Error {
 public:
  using Error::Error;
};

class ParseError : public UsageError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : UsageError(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class RangeError : public UsageError {
 public:
  using UsageError::UsageError;
};

class DimensionMismatch : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Gram matrix of an explicit diagram is not positive definite (infinite Coxeter group).
class NotFiniteGroup : public Error {
 public:
  using Error::Error;
};

class DegenerateVector : public Error {
 public:
  using Error::Error;
};

class IterationLimit : public Error {
 public:
  using Error::Error;
};

class ElementsUnavailable : public Error {
 public:
  using Error::Error;
};

class CertificateFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace reflect
