#ifndef NYSREG_DATASET_HPP
#define NYSREG_DATASET_HPP

#include "nysreg/types.hpp"

#include <cstddef>
#include <vector>

namespace nysreg {

/// Input points, one per row. Row-major so that a point is a contiguous span.
using PointSet = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Semi-supervised sample: the first m rows of `x` are labeled by the rows of
/// `y`; the remaining n - m rows are unlabeled.
struct Dataset {
  PointSet x;                          // n x d
  Matrix y;                            // m x P
  std::vector<ViewSlice> view_slices;  // empty means a single view

  std::size_t n() const { return static_cast<std::size_t>(x.rows()); }
  std::size_t m() const { return static_cast<std::size_t>(y.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(x.cols()); }
  std::size_t outputs() const { return static_cast<std::size_t>(y.cols()); }

  /// Throws InvalidArgument unless m <= n, entries are finite and the view
  /// slices are disjoint and cover every column.
  void validate() const;
};

/// Gathers the given rows of `x` in order.
PointSet select_rows(const PointSet& x, const IndexList& rows);
Matrix select_rows(const Matrix& y, const IndexList& rows);

/// Builds the training set for a fold: rows `labeled` carry labels from
/// `labels`, followed by the unlabeled rows.
Dataset make_subset(const PointSet& x, const Matrix& labels, const IndexList& labeled,
                    const IndexList& unlabeled = {});

}  // namespace nysreg

#endif  // NYSREG_DATASET_HPP
