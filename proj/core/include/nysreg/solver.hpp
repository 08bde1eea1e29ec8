#ifndef NYSREG_SOLVER_HPP
#define NYSREG_SOLVER_HPP

#include "nysreg/dataset.hpp"
#include "nysreg/graph.hpp"
#include "nysreg/kernels.hpp"
#include "nysreg/types.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace nysreg {

/// How a graph penalty lambda_j enters the normal equations.
///   times_m: lambda_j * m * K_ns^T M_j K_ns  (objective term lambda_j f^T M_j f)
///   none:    lambda_j     * K_ns^T M_j K_ns  (objective term lambda_j/m f^T M_j f)
enum class LaplacianScaling { times_m, none };

struct PenaltyTerm {
  double lambda = 0.0;
  std::shared_ptr<const GraphPenalty> penalty;  // over all n points of the dataset
};

struct RegularizationConfig {
  double lambda0 = 1.0;
  std::vector<PenaltyTerm> graph_penalties;
  LaplacianScaling scaling = LaplacianScaling::times_m;

  /// lambda0 > 0, lambda_j >= 0, every penalty is n x n.
  void validate(std::size_t n) const;
  std::vector<double> penalty_lambdas() const;
};

/// Kernel expansion f(x) = sum_j K(x, landmark_j) c_j fitted by one of the
/// solvers below. Immutable once fitted.
struct NystromModel {
  KernelSpec kernel;
  IndexList landmark_indices;
  PointSet landmark_points;  // s x d
  Matrix coefficients;       // s x P
  double lambda0 = 0.0;
  std::vector<double> penalty_lambdas;
  LaplacianScaling scaling = LaplacianScaling::times_m;

  std::size_t landmark_count() const { return landmark_indices.size(); }
  std::size_t outputs() const { return static_cast<std::size_t>(coefficients.cols()); }
};

/// Row q is sum_j K(query_q, landmark_j) c_j.
Matrix predict(const NystromModel& model, const PointSet& queries);

enum class LandmarkMode { uniform, first_s };

/// s distinct indices from [0, n): uniform without replacement (seeded), or
/// the first s rows.
IndexList select_landmarks(std::size_t n, std::size_t s, LandmarkMode mode, std::uint64_t seed);

/// Full representer solution c = (J K + lambda_a m I + lambda_i m L K)^-1 y_n.
/// `y_n` is n x P with rows past m equal to zero. The system is nonsymmetric
/// and solved by LU; NumericalError reports the condition estimate.
Matrix fit_full_manifold(const Matrix& kernel_n, const Matrix& y_n, std::size_t m,
                         double lambda_a, double lambda_i, const GraphPenalty& laplacian);
/// Same with lambda_i = 0 (no graph term).
Matrix fit_full_manifold(const Matrix& kernel_n, const Matrix& y_n, std::size_t m,
                         double lambda_a);

/// Full solution over every point of `data` for a general configuration;
/// every graph term contributes lambda_j * scale * M_j K.
NystromModel fit_full(const Dataset& data, const KernelSpec& kernel,
                      const RegularizationConfig& config);

/// Nystrom multi-penalty solution restricted to span{K_{x_j} : j in landmarks}:
///   c = (K_ms^T K_ms + lambda0 m K_ss + sum_j lambda_j scale K_ns^T M_j K_ns)^+ K_ms^T y
/// The system is symmetrized (relative asymmetry above 1e-8 is an error) and
/// pseudo-inverted with relative eigenvalue cutoff 1e-12.
NystromModel fit_nystrom(const Dataset& data, const IndexList& landmarks, const KernelSpec& kernel,
                         const RegularizationConfig& config);

/// Finite-dimensional realization of the same problem: the RKHS is R^d with
/// f(x) = <w, phi(x)>, so every operator is an explicit matrix.
struct ExplicitFeatureProblem {
  Matrix features;  // n x d, rows phi(x_i); the first m rows are labeled
  Matrix y;         // m x P
  double lambda0 = 1.0;
  std::vector<std::pair<double, Matrix>> penalties;  // (lambda_j, M_j over n points)
  LaplacianScaling scaling = LaplacianScaling::times_m;
};

/// Solves (P S*S P + lambda0 I + sum_j lambda_j P B_j*B_j P) w = P S* y with
/// S the sampling operator on the labeled points (S* carries 1/m), P the
/// orthogonal projection onto span{phi(x_j) : j in landmarks} and
/// B_j*B_j = Phi_n^T M_j Phi_n (times_m) or Phi_n^T M_j Phi_n / m (none),
/// Phi_n being the feature rows of all n points. Returns w (d x P).
Matrix oracle_solve_explicit(const ExplicitFeatureProblem& problem, const IndexList& landmarks);

}  // namespace nysreg

#endif  // NYSREG_SOLVER_HPP
