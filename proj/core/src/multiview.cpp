#include "nysreg/multiview.hpp"

#include "nysreg/errors.hpp"
#include "nysreg/linalg.hpp"

#include <cmath>
#include <random>
#include <unordered_set>

namespace nysreg {
namespace {

constexpr double kPinvCutoff = 1e-12;
constexpr double kResidualTolerance = 1e-8;

void check_weights(const CombinationWeights& w, std::size_t views) {
  if (w.size() != views) throw InvalidArgument("combination vector length differs from view count");
  if (!w.c.allFinite()) throw InvalidArgument("combination vector is not finite");
}

}  // namespace

CombinationWeights CombinationWeights::uniform(std::size_t views, double alpha) {
  if (views == 0) throw InvalidArgument("need at least one view");
  return on_sphere(Vector::Ones(static_cast<Eigen::Index>(views)), alpha);
}

CombinationWeights CombinationWeights::on_sphere(const Vector& direction, double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("sphere radius must be positive");
  const double norm = direction.norm();
  if (!(norm > 0.0)) throw InvalidArgument("cannot project the zero vector onto the sphere");
  return {direction * (alpha / norm), alpha};
}

Matrix assemble_B(const Matrix& g, const CombinationWeights& weights, double lambda_b,
                  double lambda_w, const GraphPenalty& laplacian, std::size_t m, std::size_t n) {
  const auto v = static_cast<Eigen::Index>(weights.size());
  if (v == 0) throw InvalidArgument("combination vector is empty");
  const auto nn = static_cast<Eigen::Index>(n);
  if (g.rows() != nn * v || g.cols() % v != 0) throw InvalidArgument("assemble_B: G has the wrong shape");
  if (m > n) throw InvalidArgument("assemble_B: more labeled than total points");
  const Eigen::Index s = g.cols() / v;
  const double md = static_cast<double>(m);

  Matrix b = Matrix::Zero(g.rows(), g.cols());
  // (J_m^n (x) c c^T) G: only the labeled point blocks survive.
  const Matrix cct = weights.c * weights.c.transpose();
  for (Eigen::Index p = 0; p < static_cast<Eigen::Index>(m); ++p) {
    b.middleRows(p * v, v).noalias() += cct * g.middleRows(p * v, v);
  }
  if (lambda_b != 0.0 && v > 1) {
    const Matrix mv = (md * lambda_b) * between_view_operator(static_cast<std::size_t>(v));
    for (Eigen::Index p = 0; p < nn; ++p) {
      b.middleRows(p * v, v).noalias() += mv * g.middleRows(p * v, v);
    }
  }
  if (lambda_w != 0.0) {
    const Matrix& l = laplacian.laplacian;
    if (l.rows() != nn * v || l.cols() != nn * v) throw InvalidArgument("assemble_B: Laplacian has the wrong shape");
    // Column q*v + j of G is nonzero only on rows r*v + j.
    for (Eigen::Index j = 0; j < v; ++j) {
      Matrix l_cols(nn * v, nn);
      Matrix k_view(nn, s);
      for (Eigen::Index r = 0; r < nn; ++r) {
        l_cols.col(r) = l.col(r * v + j);
        for (Eigen::Index q = 0; q < s; ++q) k_view(r, q) = g(r * v + j, q * v + j);
      }
      const Matrix lk = (md * lambda_w) * (l_cols * k_view);
      for (Eigen::Index q = 0; q < s; ++q) b.col(q * v + j) += lk.col(q);
    }
  }
  return b;
}

Matrix combination_targets(const Matrix& y, const CombinationWeights& weights, std::size_t n) {
  const auto v = static_cast<Eigen::Index>(weights.size());
  if (static_cast<std::size_t>(y.rows()) > n) throw InvalidArgument("more labels than points");
  Matrix yc = Matrix::Zero(static_cast<Eigen::Index>(n) * v, y.cols());
  for (Eigen::Index k = 0; k < y.rows(); ++k) {
    for (Eigen::Index i = 0; i < v; ++i) yc.row(k * v + i) = weights.c(i) * y.row(k);
  }
  return yc;
}

std::vector<Matrix> MultiViewModel::predict_views(const PointSet& queries) const {
  const auto grams = per_view_grams(kernel, queries, landmark_points);
  const auto v = static_cast<Eigen::Index>(views());
  const Eigen::Index s = landmark_points.rows();
  std::vector<Matrix> out;
  out.reserve(grams.size());
  for (Eigen::Index i = 0; i < v; ++i) {
    Matrix coeff(s, coefficients.cols());
    for (Eigen::Index j = 0; j < s; ++j) coeff.row(j) = coefficients.row(j * v + i);
    out.push_back(grams[static_cast<std::size_t>(i)] * coeff);
  }
  return out;
}

Matrix MultiViewModel::predict(const PointSet& queries) const { return predict(queries, weights); }

Matrix MultiViewModel::predict(const PointSet& queries, const CombinationWeights& w) const {
  check_weights(w, views());
  const auto per_view = predict_views(queries);
  Matrix out = Matrix::Zero(queries.rows(), coefficients.cols());
  for (std::size_t i = 0; i < per_view.size(); ++i) out += w.c(static_cast<Eigen::Index>(i)) * per_view[i];
  return out;
}

MultiViewModel fit_multiview(const Dataset& data, const MultiViewKernel& kernel,
                             const IndexList& landmarks, const CombinationWeights& weights,
                             const MultiViewConfig& config, const GraphPenalty& laplacian) {
  kernel.validate(data.dim());
  check_weights(weights, kernel.view_count());
  if (data.m() == 0) throw InvalidArgument("no labeled data");
  if (data.m() > data.n()) throw InvalidArgument("more labels than points");
  if (!(config.lambda_a > 0.0)) throw InvalidArgument("lambda_A must be positive");
  if (!(config.lambda_b >= 0.0) || !(config.lambda_w >= 0.0)) {
    throw InvalidArgument("lambda_B and lambda_W must be nonnegative");
  }

  const std::size_t n = data.n();
  const std::size_t m = data.m();
  const IndexList all = iota_indices(n);
  const IndexList& chosen = landmarks.empty() ? all : landmarks;
  std::unordered_set<std::size_t> seen;
  for (std::size_t idx : chosen) {
    if (idx >= n) throw InvalidArgument("landmark index out of range");
    if (!seen.insert(idx).second) throw InvalidArgument("landmark indices must be distinct");
  }
  const bool full = chosen == all;

  MultiViewModel model;
  model.kernel = kernel;
  model.landmark_indices = chosen;
  model.landmark_points = select_rows(data.x, chosen);
  model.weights = weights;
  model.config = config;

  const Matrix g = multiview_gram(kernel, data.x, model.landmark_points);
  const Matrix b = assemble_B(g, weights, config.lambda_b, config.lambda_w, laplacian, m, n);
  const Matrix yc = combination_targets(data.y, weights, n);
  const double shift = static_cast<double>(m) * config.lambda_a;

  if (full) {
    Matrix system = b;
    system.diagonal().array() += shift;
    model.coefficients = linalg::general_solve(system, yc);
    const double residual = (system * model.coefficients - yc).norm();
    if (residual > kResidualTolerance * std::max(yc.norm(), 1e-300)) {
      throw NumericalError("multi-view solve residual " + std::to_string(residual) +
                           " exceeds tolerance");
    }
    return model;
  }

  // Landmark-restricted normal equations; G^T B is symmetric in exact arithmetic.
  std::vector<Matrix> kss_blocks = per_view_grams(kernel, model.landmark_points, model.landmark_points);
  const Matrix g_ss = interleave_views(kss_blocks);
  Matrix system = g.transpose() * b;
  system.noalias() += shift * g_ss;
  const Matrix rhs = g.transpose() * yc;
  const Matrix symmetric = linalg::symmetrized(system, 1e-8, "multi-view Nystrom system");
  auto solved = linalg::symmetric_pinv_solve(symmetric, rhs, kPinvCutoff);
  if (!solved.solution.allFinite()) throw NumericalError("multi-view coefficients are not finite");
  model.coefficients = std::move(solved.solution);
  return model;
}

double combination_loss(const std::vector<Matrix>& view_predictions, const Matrix& y,
                        const Vector& c) {
  Matrix residual = y;
  for (std::size_t i = 0; i < view_predictions.size(); ++i) {
    residual -= c(static_cast<Eigen::Index>(i)) * view_predictions[i];
  }
  return residual.squaredNorm();
}

CombinationWeights optimize_combination(const std::vector<Matrix>& view_predictions,
                                        const Matrix& validation_y, double alpha,
                                        const CombinationSearch& search) {
  const auto v = static_cast<Eigen::Index>(view_predictions.size());
  if (v == 0) throw InvalidArgument("no views to combine");
  if (validation_y.rows() == 0) throw InvalidArgument("validation set is empty");
  for (const auto& f : view_predictions) {
    if (f.rows() != validation_y.rows() || f.cols() != validation_y.cols()) {
      throw InvalidArgument("view predictions do not match validation labels");
    }
  }
  if (v == 1) return CombinationWeights::on_sphere(Vector::Ones(1), alpha);

  // loss(c) = c^T Q c - 2 c^T q + |Y|^2
  Matrix q_mat(v, v);
  Vector q_vec(v);
  for (Eigen::Index i = 0; i < v; ++i) {
    q_vec(i) = (validation_y.array() * view_predictions[static_cast<std::size_t>(i)].array()).sum();
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double dot = (view_predictions[static_cast<std::size_t>(i)].array() *
                          view_predictions[static_cast<std::size_t>(j)].array()).sum();
      q_mat(i, j) = dot;
      q_mat(j, i) = dot;
    }
  }
  const double y_sq = validation_y.squaredNorm();
  const auto loss = [&](const Vector& c) { return c.dot(q_mat * c) - 2.0 * c.dot(q_vec) + y_sq; };

  std::vector<Vector> starts;
  starts.push_back(CombinationWeights::uniform(static_cast<std::size_t>(v), alpha).c);
  std::mt19937_64 rng(search.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int r = 0; r < search.restarts; ++r) {
    Vector d(v);
    for (Eigen::Index i = 0; i < v; ++i) d(i) = normal(rng);
    if (d.norm() == 0.0) d(0) = 1.0;
    starts.push_back(d * (alpha / d.norm()));
  }

  Vector best = starts.front();
  double best_loss = loss(best);
  for (const Vector& start : starts) {
    Vector c = start;
    double current = loss(c);
    for (int iter = 0; iter < search.iterations; ++iter) {
      bool moved = false;
      for (Eigen::Index i = 0; i < v; ++i) {
        if (!(q_mat(i, i) > 0.0)) continue;
        // Minimize along coordinate i with the others fixed, then project back.
        Vector trial = c;
        trial(i) = (q_vec(i) - q_mat.row(i).dot(c) + q_mat(i, i) * c(i)) / q_mat(i, i);
        const double norm = trial.norm();
        if (!(norm > 0.0)) continue;
        trial *= alpha / norm;
        const double trial_loss = loss(trial);
        if (trial_loss < current) {
          c = trial;
          current = trial_loss;
          moved = true;
        }
      }
      if (current < best_loss) {
        best_loss = current;
        best = c;
      }
      if (!moved) break;
    }
  }
  return {best * (alpha / best.norm()), alpha};
}

CombinationWeights optimize_combination(const MultiViewModel& model, const PointSet& validation_x,
                                        const Matrix& validation_y, double alpha,
                                        const CombinationSearch& search) {
  if (validation_x.rows() == 0) throw InvalidArgument("validation set is empty");
  return optimize_combination(model.predict_views(validation_x), validation_y, alpha, search);
}

std::size_t argmax_class(const Eigen::Ref<const RowVector>& scores) {
  if (scores.size() == 0) throw InvalidArgument("no class scores");
  std::size_t best = 0;
  for (Eigen::Index k = 1; k < scores.size(); ++k) {
    if (scores(k) > scores(static_cast<Eigen::Index>(best))) best = static_cast<std::size_t>(k);
  }
  return best;
}

std::vector<std::size_t> classify_multiview(const MultiViewModel& model, const PointSet& queries) {
  const Matrix scores = model.predict(queries);
  std::vector<std::size_t> out(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) out[static_cast<std::size_t>(i)] = argmax_class(scores.row(i));
  return out;
}

Matrix one_vs_rest_codes(const std::vector<std::size_t>& classes, std::size_t class_count) {
  Matrix y = -Matrix::Ones(static_cast<Eigen::Index>(classes.size()), static_cast<Eigen::Index>(class_count));
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (classes[k] >= class_count) throw InvalidArgument("class index out of range");
    y(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(classes[k])) = 1.0;
  }
  return y;
}

}  // namespace nysreg
