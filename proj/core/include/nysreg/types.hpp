#ifndef NYSREG_TYPES_HPP
#define NYSREG_TYPES_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace nysreg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Row positions into a dataset, in the order the caller wants them.
using IndexList = std::vector<std::size_t>;

/// A contiguous block of input columns that forms one view of the data.
struct ViewSlice {
  std::size_t offset = 0;
  std::size_t width = 0;

  friend bool operator==(const ViewSlice&, const ViewSlice&) = default;
};

/// 0, 1, ..., n-1.
IndexList iota_indices(std::size_t n);

}  // namespace nysreg

#endif  // NYSREG_TYPES_HPP
