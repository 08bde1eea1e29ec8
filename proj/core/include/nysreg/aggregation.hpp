#ifndef NYSREG_AGGREGATION_HPP
#define NYSREG_AGGREGATION_HPP

#include "nysreg/dataset.hpp"
#include "nysreg/solver.hpp"
#include "nysreg/types.hpp"

#include <span>
#include <vector>

namespace nysreg {

/// Empirical linear-functional-strategy system and its solution.
///   Hbar_ij = (1/n) sum_{r<n} <f_i(x_r), f_j(x_r)>   (all points)
///   hbar_i  = (1/m) sum_{r<m} <y_r, f_i(x_r)>        (labeled points)
/// cbar = Hbar^+ hbar with eigenvalues below 1e-10 * max dropped.
struct LfsSolution {
  Matrix hbar_matrix;  // l x l
  Vector hbar;         // l
  Vector cbar;         // l
  Eigen::Index rank = 0;

  /// Q(c) = c^T Hbar c - 2 c^T hbar.
  double proxy(const Vector& c) const;
};

/// `member_values[i]` is member i evaluated at all n points (n x P); `y` holds
/// labels for the first m of them (m x P).
LfsSolution solve_lfs(std::span<const Matrix> member_values, const Matrix& y);

struct AggregatedModel {
  std::vector<NystromModel> members;
  Vector cbar;
  Matrix hbar_matrix;
  Vector hbar;
};

/// Fits the combination weights of `members` on `data` (all n points for
/// Hbar, the m labeled ones for hbar).
AggregatedModel aggregate_lfs(std::vector<NystromModel> members, const Dataset& data);

/// sum_i cbar_i f_i(query).
Matrix predict_aggregate(const AggregatedModel& model, const PointSet& queries);
/// Same, from member predictions already evaluated at the queries.
Matrix combine_predictions(std::span<const Matrix> member_values, const Vector& cbar);

}  // namespace nysreg

#endif  // NYSREG_AGGREGATION_HPP
