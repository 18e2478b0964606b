#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sfw {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates a documented precondition.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
public:
  DimensionMismatch(const std::string& what, Index expected, Index got)
      : InvalidArgument(what + ": expected dimension " + std::to_string(expected) +
                        ", got " + std::to_string(got)) {}
};

/// Raised when a computation cannot proceed, e.g. an enumeration guard or
/// a batch schedule overflow.
class ComputationError : public Error {
public:
  using Error::Error;
};

void require_finite(const Vector& v, const char* what);

}  // namespace sfw
