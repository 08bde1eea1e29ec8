#include "nysreg/graph.hpp"

#include "nysreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nysreg {

Matrix exp_weights(const PointSet& x, double b, const IndexList& rows) {
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidArgument("graph bandwidth b must be positive");
  for (std::size_t r : rows) {
    if (r >= static_cast<std::size_t>(x.rows())) throw InvalidArgument("graph row out of range");
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  const double scale = 1.0 / (4.0 * b);
  Matrix w(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    w(j, j) = 1.0;
    const auto xj = x.row(static_cast<Eigen::Index>(rows[static_cast<std::size_t>(j)]));
    for (Eigen::Index i = 0; i < j; ++i) {
      const auto xi = x.row(static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)]));
      const double value = std::exp(-(xi - xj).squaredNorm() * scale);
      w(i, j) = value;
      w(j, i) = value;
    }
  }
  return w;
}

Matrix exp_weights(const PointSet& x, double b) {
  return exp_weights(x, b, iota_indices(static_cast<std::size_t>(x.rows())));
}

Matrix knn_truncate(const Matrix& weights, std::size_t k) {
  const Eigen::Index n = weights.rows();
  if (weights.cols() != n) throw InvalidArgument("weight matrix must be square");
  Matrix kept = Matrix::Zero(n, n);
  std::vector<Eigen::Index> order;
  for (Eigen::Index i = 0; i < n; ++i) {
    order.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) order.push_back(j);
    }
    const auto keep = std::min<std::size_t>(k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                        if (weights(i, a) != weights(i, b)) return weights(i, a) > weights(i, b);
                        return a < b;
                      });
    for (std::size_t t = 0; t < keep; ++t) kept(i, order[t]) = weights(i, order[t]);
    kept(i, i) = weights(i, i);
  }
  return kept.cwiseMax(kept.transpose());
}

GraphPenalty laplacian(const Matrix& weights) {
  const Eigen::Index n = weights.rows();
  if (weights.cols() != n) throw InvalidArgument("weight matrix must be square");
  if (!weights.allFinite()) throw InvalidArgument("weight matrix has non-finite entries");
  if (n > 0 && weights.minCoeff() < 0.0) throw InvalidArgument("weight matrix has negative entries");
  if (n > 0) {
    const double scale = std::max(1.0, weights.cwiseAbs().maxCoeff());
    if ((weights - weights.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw InvalidArgument("weight matrix is not symmetric");
    }
  }
  GraphPenalty penalty;
  penalty.weights = weights;
  penalty.laplacian = -weights;
  for (Eigen::Index i = 0; i < n; ++i) {
    // Off-diagonal row sum, so that the self-loop w_ii cancels exactly.
    double degree = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) degree += weights(i, j);
    }
    penalty.laplacian(i, i) = degree;
  }
  return penalty;
}

Matrix between_view_operator(std::size_t v) {
  if (v < 1) throw InvalidArgument("view count must be at least 1");
  const auto vv = static_cast<Eigen::Index>(v);
  Matrix m = -Matrix::Ones(vv, vv);
  m.diagonal().array() += static_cast<double>(v);
  return m;
}

GraphPenalty between_view_penalty(std::size_t n, std::size_t v) {
  const Matrix block = between_view_operator(v);
  const auto vv = static_cast<Eigen::Index>(v);
  const auto nv = static_cast<Eigen::Index>(n) * vv;
  GraphPenalty penalty;
  penalty.kind = PenaltyKind::between_view;
  penalty.weights = Matrix::Zero(nv, nv);
  penalty.laplacian = Matrix::Zero(nv, nv);
  for (Eigen::Index p = 0; p < static_cast<Eigen::Index>(n); ++p) {
    penalty.laplacian.block(p * vv, p * vv, vv, vv) = block;
    penalty.weights.block(p * vv, p * vv, vv, vv) = Matrix::Ones(vv, vv) - Matrix::Identity(vv, vv);
  }
  return penalty;
}

GraphPenalty multiview_block_laplacian(std::span<const GraphPenalty> per_view) {
  if (per_view.empty()) throw InvalidArgument("need at least one per-view Laplacian");
  const Eigen::Index n = per_view.front().laplacian.rows();
  const auto v = static_cast<Eigen::Index>(per_view.size());
  for (const auto& g : per_view) {
    if (g.laplacian.rows() != n || g.laplacian.cols() != n) {
      throw InvalidArgument("per-view Laplacians differ in size");
    }
  }
  GraphPenalty block;
  block.kind = v == 1 ? per_view.front().kind : PenaltyKind::multiview_block;
  block.laplacian = Matrix::Zero(n * v, n * v);
  block.weights = Matrix::Zero(n * v, n * v);
  for (Eigen::Index i = 0; i < v; ++i) {
    const auto& g = per_view[static_cast<std::size_t>(i)];
    const bool has_weights = g.weights.rows() == n && g.weights.cols() == n;
    for (Eigen::Index q = 0; q < n; ++q) {
      for (Eigen::Index p = 0; p < n; ++p) {
        block.laplacian(p * v + i, q * v + i) = g.laplacian(p, q);
        if (has_weights) block.weights(p * v + i, q * v + i) = g.weights(p, q);
      }
    }
  }
  return block;
}

}  // namespace nysreg
