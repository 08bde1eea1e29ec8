#ifndef NYSREG_MULTIVIEW_HPP
#define NYSREG_MULTIVIEW_HPP

#include "nysreg/dataset.hpp"
#include "nysreg/graph.hpp"
#include "nysreg/kernels.hpp"
#include "nysreg/types.hpp"

#include <cstdint>
#include <vector>

namespace nysreg {

/// Combination operator C f(x) = sum_i c_i f^i(x); c lives on the sphere |c| = alpha.
struct CombinationWeights {
  Vector c;
  double alpha = 1.0;

  static CombinationWeights uniform(std::size_t views, double alpha = 1.0);
  /// Rescales `direction` onto the sphere of radius alpha.
  static CombinationWeights on_sphere(const Vector& direction, double alpha = 1.0);
  std::size_t size() const { return static_cast<std::size_t>(c.size()); }
};

struct MultiViewConfig {
  double lambda_a = 1e-5;  // ambient norm
  double lambda_b = 1e-6;  // between-view consistency
  double lambda_w = 1e-6;  // within-view graph smoothness
};

/// Fitted multi-view estimator. Coefficients are stored point-major: row
/// j*v + i holds the P coefficients of landmark j in view i.
struct MultiViewModel {
  MultiViewKernel kernel;
  IndexList landmark_indices;
  PointSet landmark_points;
  Matrix coefficients;  // (s v) x P
  CombinationWeights weights;
  MultiViewConfig config;

  std::size_t views() const { return kernel.view_count(); }
  std::size_t classes() const { return static_cast<std::size_t>(coefficients.cols()); }

  /// f^i evaluated at every query, one q x P matrix per view.
  std::vector<Matrix> predict_views(const PointSet& queries) const;
  /// C f at every query (q x P) using the stored weights.
  Matrix predict(const PointSet& queries) const;
  Matrix predict(const PointSet& queries, const CombinationWeights& weights) const;
};

/// B = ((J_m^n (x) c c^T) + m lambda_b (I_n (x) M_v) + m lambda_w L) G where G is
/// an (n v) x (s v) matrix in the multiview_gram layout and L the (n v) x (n v)
/// block Laplacian. The Kronecker factors are applied blockwise.
Matrix assemble_B(const Matrix& g, const CombinationWeights& weights, double lambda_b,
                  double lambda_w, const GraphPenalty& laplacian, std::size_t m, std::size_t n);

/// Y_C with C* y = vec(Y_C^T): row k*v + i is c_i y_k for k < m, zero after.
Matrix combination_targets(const Matrix& y, const CombinationWeights& weights, std::size_t n);

/// Multi-view manifold regularization.
///
/// With `landmarks` empty (or equal to 0..n-1) the (n v) x (n v) system
/// B A + m lambda_a A = Y_C is solved by LU and its residual checked against
/// 1e-8 |Y_C|. With a proper landmark subset the estimator is restricted to
/// the landmark span and (G^T B + m lambda_a G_ss) A = G^T Y_C is solved by
/// the same symmetric pseudoinverse used for scalar Nystrom fits.
///
/// `data.y` holds P-column codes for the first m points; `laplacian` is the
/// block Laplacian over all n points (size n v).
MultiViewModel fit_multiview(const Dataset& data, const MultiViewKernel& kernel,
                             const IndexList& landmarks, const CombinationWeights& weights,
                             const MultiViewConfig& config, const GraphPenalty& laplacian);

struct CombinationSearch {
  int iterations = 25;
  int restarts = 5;
  std::uint64_t seed = 0;
};

/// Squared validation error sum_k |y_k - sum_i c_i f^i(x_k)|^2.
double combination_loss(const std::vector<Matrix>& view_predictions, const Matrix& y,
                        const Vector& c);

/// Projected coordinate descent over the sphere |c| = alpha, started from the
/// uniform vector and from `restarts` random points; keeps the best iterate
/// by validation loss. The model's coefficients stay fixed.
CombinationWeights optimize_combination(const MultiViewModel& model, const PointSet& validation_x,
                                        const Matrix& validation_y, double alpha,
                                        const CombinationSearch& search = {});
CombinationWeights optimize_combination(const std::vector<Matrix>& view_predictions,
                                        const Matrix& validation_y, double alpha,
                                        const CombinationSearch& search = {});

/// Index of the largest score; ties go to the lowest index.
std::size_t argmax_class(const Eigen::Ref<const RowVector>& scores);
std::vector<std::size_t> classify_multiview(const MultiViewModel& model, const PointSet& queries);

/// Codes class k as (-1, ..., 1 at k, ..., -1).
Matrix one_vs_rest_codes(const std::vector<std::size_t>& classes, std::size_t class_count);

}  // namespace nysreg

#endif  // NYSREG_MULTIVIEW_HPP
