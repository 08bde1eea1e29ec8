#ifndef NYSREG_GRAPH_HPP
#define NYSREG_GRAPH_HPP

#include "nysreg/dataset.hpp"
#include "nysreg/types.hpp"

#include <span>

namespace nysreg {

enum class PenaltyKind { single_view, multiview_block, between_view };

/// Quadratic penalty f^T L f over sampled function values, L = D - W.
struct GraphPenalty {
  Matrix weights;    // W; symmetric, nonnegative
  Matrix laplacian;  // L
  PenaltyKind kind = PenaltyKind::single_view;

  std::size_t size() const { return static_cast<std::size_t>(laplacian.rows()); }
};

/// w_ij = exp(-|x_i - x_j|^2 / (4b)) over the selected rows; diagonal is 1.
Matrix exp_weights(const PointSet& x, double b, const IndexList& rows);
Matrix exp_weights(const PointSet& x, double b);

/// Keeps the k largest off-diagonal weights of every row, then symmetrizes
/// by elementwise max. The diagonal is left untouched.
Matrix knn_truncate(const Matrix& weights, std::size_t k);

/// Unnormalized Laplacian D - W with D_ii = sum_j w_ij.
GraphPenalty laplacian(const Matrix& weights);

/// M_v = v I_v - 1 1^T, the Laplacian of the complete graph on v views.
Matrix between_view_operator(std::size_t v);

/// I_n (x) M_v in point-major order; penalizes disagreement between views.
GraphPenalty between_view_penalty(std::size_t n, std::size_t v);

/// nv x nv Laplacian whose (i,j) block is diag(L^1_ij, ..., L^v_ij).
GraphPenalty multiview_block_laplacian(std::span<const GraphPenalty> per_view);

}  // namespace nysreg

#endif  // NYSREG_GRAPH_HPP
