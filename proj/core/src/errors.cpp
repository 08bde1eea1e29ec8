#include "nysreg/errors.hpp"

#include <limits>

namespace nysreg {

NumericalError::NumericalError(const std::string& what, double condition_estimate)
    : Error(what), condition_estimate_(condition_estimate) {}

NumericalError::NumericalError(const std::string& what)
    : Error(what), condition_estimate_(std::numeric_limits<double>::infinity()) {}

}  // namespace nysreg
