#ifndef NYSREG_ERRORS_HPP
#define NYSREG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nysreg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates a documented precondition
/// (non-positive bandwidth, empty landmark set, mismatched sizes...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input data could not be read or does not have the expected shape.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A linear system could not be solved to the required accuracy.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double condition_estimate);
  explicit NumericalError(const std::string& what);

  /// Reciprocal-condition based estimate of cond(A); infinity when unknown.
  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

}  // namespace nysreg

#endif  // NYSREG_ERRORS_HPP
