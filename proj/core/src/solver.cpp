#include "nysreg/solver.hpp"

#include "nysreg/errors.hpp"
#include "nysreg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

namespace nysreg {
namespace {

constexpr double kPinvCutoff = 1e-12;
constexpr double kAsymmetryTolerance = 1e-8;

double penalty_scale(LaplacianScaling scaling, std::size_t m) {
  return scaling == LaplacianScaling::times_m ? static_cast<double>(m) : 1.0;
}

void check_labels(const Dataset& data) {
  if (data.m() == 0) throw InvalidArgument("no labeled data");
  if (data.m() > data.n()) throw InvalidArgument("more labels than points");
  if (!data.y.allFinite()) throw InvalidArgument("labels are not finite");
}

}  // namespace

void RegularizationConfig::validate(std::size_t n) const {
  if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) {
    throw InvalidArgument("lambda0 must be positive");
  }
  for (const auto& term : graph_penalties) {
    if (!(term.lambda >= 0.0) || !std::isfinite(term.lambda)) {
      throw InvalidArgument("graph penalty weights must be nonnegative");
    }
    if (!term.penalty) throw InvalidArgument("graph penalty is missing");
    if (term.penalty->size() != n || term.penalty->laplacian.cols() != static_cast<Eigen::Index>(n)) {
      throw InvalidArgument("graph penalty size does not match the dataset");
    }
  }
}

std::vector<double> RegularizationConfig::penalty_lambdas() const {
  std::vector<double> out;
  out.reserve(graph_penalties.size());
  for (const auto& term : graph_penalties) out.push_back(term.lambda);
  return out;
}

Matrix predict(const NystromModel& model, const PointSet& queries) {
  if (queries.cols() != model.landmark_points.cols()) {
    throw InvalidArgument("query dimension does not match the model");
  }
  return gram(model.kernel, queries, model.landmark_points) * model.coefficients;
}

IndexList select_landmarks(std::size_t n, std::size_t s, LandmarkMode mode, std::uint64_t seed) {
  if (s == 0) throw InvalidArgument("landmark set is empty");
  if (s > n) throw InvalidArgument("more landmarks than points");
  IndexList pool = iota_indices(n);
  if (mode == LandmarkMode::first_s) {
    pool.resize(s);
    return pool;
  }
  // Partial Fisher-Yates: the first s slots end up a uniform sample.
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < s; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(s);
  return pool;
}

Matrix fit_full_manifold(const Matrix& kernel_n, const Matrix& y_n, std::size_t m,
                         double lambda_a, double lambda_i, const GraphPenalty& laplacian) {
  const Eigen::Index n = kernel_n.rows();
  if (kernel_n.cols() != n || y_n.rows() != n) throw InvalidArgument("full solve: size mismatch");
  if (m == 0 || m > static_cast<std::size_t>(n)) throw InvalidArgument("full solve: bad labeled count");
  if (!(lambda_a > 0.0)) throw InvalidArgument("lambda_A must be positive");
  if (!(lambda_i >= 0.0)) throw InvalidArgument("lambda_I must be nonnegative");
  const auto mm = static_cast<Eigen::Index>(m);
  if (n > mm && !y_n.bottomRows(n - mm).isZero(0.0)) {
    throw InvalidArgument("full solve: rows past m must be zero");
  }

  const double md = static_cast<double>(m);
  Matrix system = Matrix::Zero(n, n);
  system.topRows(mm) = kernel_n.topRows(mm);  // J K
  system.diagonal().array() += lambda_a * md;
  if (lambda_i > 0.0) {
    if (laplacian.size() != static_cast<std::size_t>(n)) {
      throw InvalidArgument("full solve: Laplacian size mismatch");
    }
    system.noalias() += (lambda_i * md) * (laplacian.laplacian * kernel_n);
  }
  return linalg::general_solve(system, y_n);
}

Matrix fit_full_manifold(const Matrix& kernel_n, const Matrix& y_n, std::size_t m,
                         double lambda_a) {
  return fit_full_manifold(kernel_n, y_n, m, lambda_a, 0.0, GraphPenalty{});
}

NystromModel fit_full(const Dataset& data, const KernelSpec& kernel,
                      const RegularizationConfig& config) {
  check_labels(data);
  config.validate(data.n());
  const auto n = static_cast<Eigen::Index>(data.n());
  const auto m = static_cast<Eigen::Index>(data.m());
  const Matrix k = gram(kernel, data.x);

  Matrix system = Matrix::Zero(n, n);
  system.topRows(m) = k.topRows(m);
  system.diagonal().array() += config.lambda0 * static_cast<double>(m);
  const double scale = penalty_scale(config.scaling, data.m());
  for (const auto& term : config.graph_penalties) {
    if (term.lambda == 0.0) continue;
    system.noalias() += (term.lambda * scale) * (term.penalty->laplacian * k);
  }
  Matrix rhs = Matrix::Zero(n, data.y.cols());
  rhs.topRows(m) = data.y;

  NystromModel model;
  model.kernel = kernel;
  model.landmark_indices = iota_indices(data.n());
  model.landmark_points = data.x;
  model.coefficients = linalg::general_solve(system, rhs);
  model.lambda0 = config.lambda0;
  model.penalty_lambdas = config.penalty_lambdas();
  model.scaling = config.scaling;
  return model;
}

NystromModel fit_nystrom(const Dataset& data, const IndexList& landmarks, const KernelSpec& kernel,
                         const RegularizationConfig& config) {
  check_labels(data);
  config.validate(data.n());
  if (landmarks.empty()) throw InvalidArgument("landmark set is empty");
  std::unordered_set<std::size_t> seen;
  for (std::size_t idx : landmarks) {
    if (idx >= data.n()) throw InvalidArgument("landmark index out of range");
    if (!seen.insert(idx).second) throw InvalidArgument("landmark indices must be distinct");
  }

  const auto m = static_cast<Eigen::Index>(data.m());
  const PointSet landmark_points = select_rows(data.x, landmarks);
  const Matrix k_ss = gram(kernel, landmark_points);
  if (k_ss.cwiseAbs().maxCoeff() == 0.0) {
    throw InvalidArgument("kernel is degenerate on the landmark set (K_ss = 0)");
  }

  const bool needs_graph = std::any_of(config.graph_penalties.begin(), config.graph_penalties.end(),
                                       [](const PenaltyTerm& t) { return t.lambda != 0.0; });
  // Only the labeled rows are needed unless a graph term touches all n points.
  const PointSet& rows = data.x;
  const Matrix k_ns = needs_graph ? gram(kernel, rows, landmark_points)
                                  : gram(kernel, PointSet(rows.topRows(m)), landmark_points);
  const auto k_ms = k_ns.topRows(m);

  Matrix system = k_ms.transpose() * k_ms;
  system.noalias() += (config.lambda0 * static_cast<double>(data.m())) * k_ss;
  const double scale = penalty_scale(config.scaling, data.m());
  for (const auto& term : config.graph_penalties) {
    if (term.lambda == 0.0) continue;
    const Matrix lk = term.penalty->laplacian * k_ns;
    system.noalias() += (term.lambda * scale) * (k_ns.transpose() * lk);
  }
  const Matrix rhs = k_ms.transpose() * data.y;

  const Matrix symmetric = linalg::symmetrized(system, kAsymmetryTolerance, "Nystrom system");
  auto solved = linalg::symmetric_pinv_solve(symmetric, rhs, kPinvCutoff);
  if (!solved.solution.allFinite()) throw NumericalError("Nystrom coefficients are not finite");

  NystromModel model;
  model.kernel = kernel;
  model.landmark_indices = landmarks;
  model.landmark_points = landmark_points;
  model.coefficients = std::move(solved.solution);
  model.lambda0 = config.lambda0;
  model.penalty_lambdas = config.penalty_lambdas();
  model.scaling = config.scaling;
  return model;
}

Matrix oracle_solve_explicit(const ExplicitFeatureProblem& problem, const IndexList& landmarks) {
  const Matrix& phi = problem.features;
  const Eigen::Index n = phi.rows();
  const Eigen::Index d = phi.cols();
  const Eigen::Index m = problem.y.rows();
  if (m == 0 || m > n) throw InvalidArgument("explicit problem: bad labeled count");
  if (landmarks.empty()) throw InvalidArgument("landmark set is empty");
  if (!(problem.lambda0 > 0.0)) throw InvalidArgument("lambda0 must be positive");

  // Sampling operator S: R^d -> R^m, S w = Phi_m w; its adjoint carries 1/m.
  const Matrix sampling = phi.topRows(m);
  const Matrix sampling_adjoint = sampling.transpose() / static_cast<double>(m);

  // Orthogonal projection onto span{phi(x_j)}: P = U U^T for an orthonormal
  // basis U of the landmark feature span.
  Matrix landmark_features(static_cast<Eigen::Index>(landmarks.size()), d);
  for (std::size_t j = 0; j < landmarks.size(); ++j) {
    if (landmarks[j] >= static_cast<std::size_t>(n)) throw InvalidArgument("landmark out of range");
    landmark_features.row(static_cast<Eigen::Index>(j)) = phi.row(static_cast<Eigen::Index>(landmarks[j]));
  }
  Eigen::JacobiSVD<Matrix> svd(landmark_features.transpose(), Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-12 * sv(0)) ++rank;
  }
  const Matrix basis = svd.matrixU().leftCols(rank);
  const Matrix projection = basis * basis.transpose();

  Matrix op = projection * sampling_adjoint * sampling * projection;
  op.diagonal().array() += problem.lambda0;
  const double scale = problem.scaling == LaplacianScaling::times_m ? 1.0 : 1.0 / static_cast<double>(m);
  for (const auto& [lambda, penalty] : problem.penalties) {
    if (penalty.rows() != n || penalty.cols() != n) throw InvalidArgument("penalty size mismatch");
    const Matrix bb = scale * (phi.transpose() * penalty * phi);
    op.noalias() += lambda * (projection * bb * projection);
  }
  const Matrix rhs = projection * sampling_adjoint * problem.y;
  return op.fullPivLu().solve(rhs);
}

}  // namespace nysreg
