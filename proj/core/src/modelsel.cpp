#include "nysreg/modelsel.hpp"

#include "nysreg/data.hpp"
#include "nysreg/errors.hpp"
#include "nysreg/graph.hpp"
#include "nysreg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <ostream>
#include <tuple>

namespace nysreg {
namespace {

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be positive");
}

void require_square(const Matrix& k) {
  if (k.rows() != k.cols() || k.rows() == 0) throw InvalidArgument("kernel matrix must be square and nonempty");
}

}  // namespace

double effective_dimension(const Matrix& kernel, double gamma) {
  require_gamma(gamma);
  require_square(kernel);
  const Vector sigma = linalg::symmetric_eigenvalues(kernel / static_cast<double>(kernel.rows()));
  double total = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const double s = std::max(sigma(i), 0.0);
    total += s / (s + gamma);
  }
  return total;
}

Vector point_leverage(const Matrix& kernel, double gamma) {
  require_gamma(gamma);
  require_square(kernel);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(kernel / static_cast<double>(kernel.rows()));
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Vector& sigma = eig.eigenvalues();
  Vector ratio(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const double s = std::max(sigma(i), 0.0);
    ratio(i) = s / (s + gamma);
  }
  const Matrix& u = eig.eigenvectors();
  return (u.array().square().matrix() * ratio).cwiseMax(0.0);
}

double nystrom_gap(const Matrix& k_nn, const Matrix& k_ns, const Matrix& k_ss) {
  require_square(k_nn);
  if (k_ns.rows() != k_nn.rows() || k_ss.rows() != k_ss.cols() || k_ns.cols() != k_ss.rows()) {
    throw InvalidArgument("Nystrom gap: block sizes are inconsistent");
  }
  const auto proj = linalg::symmetric_pinv_solve(k_ss, k_ns.transpose(), 1e-12);
  const Matrix schur = (k_nn - k_ns * proj.solution) / static_cast<double>(k_nn.rows());
  const Vector values = linalg::symmetric_eigenvalues(0.5 * (schur + schur.transpose()));
  return std::max(values(values.size() - 1), 0.0);
}

ParameterChoice parameter_rule(const RateRuleConfig& cfg) {
  if (!(cfg.r >= 0.0 && cfg.r <= 1.0)) throw InvalidArgument("Hoelder exponent r must lie in [0, 1]");
  if (cfg.b && !(*cfg.b > 1.0)) throw InvalidArgument("decay exponent b must exceed 1");
  if (!(cfg.m >= 2.0)) throw InvalidArgument("sample size must be at least 2");
  const double exponent = cfg.b ? *cfg.b / (2.0 * *cfg.b * cfg.r + *cfg.b + 1.0)
                                : 1.0 / (2.0 * cfg.r + 2.0);
  ParameterChoice out;
  out.lambda0 = std::min(1.0, std::pow(cfg.m, -exponent));
  out.lambda_j = std::pow(out.lambda0, 1.5) * std::pow(out.lambda0, cfg.r);
  return out;
}

bool check_sample_condition(double m, double kappa_sq, double lambda0, double eta) {
  return 8.0 * kappa_sq / std::sqrt(m) * std::log(4.0 / eta) <= lambda0;
}

std::size_t recommend_subsample_size(double lambda0, double delta, double kappa_sq, double n_inf) {
  if (!(lambda0 > 0.0) || !(delta > 0.0) || !(kappa_sq > 0.0) || !(n_inf >= 0.0)) {
    throw InvalidArgument("subsample rule needs positive lambda0, delta and kappa^2");
  }
  const double log_term = std::log(12.0 * kappa_sq / (lambda0 * delta));
  const double bound = std::max(67.0 * log_term, 5.0 * n_inf * log_term);
  // Tolerate round-off just above an integer (e.g. 134.00000000000003).
  const double rounded = std::ceil(bound - 1e-9 * std::max(1.0, std::abs(bound)));
  return rounded < 1.0 ? 1 : static_cast<std::size_t>(rounded);
}

double estimate_n_infinity(const Matrix& kernel, double lambda0) {
  const Vector lev = point_leverage(kernel, lambda0 / 3.0);
  return static_cast<double>(kernel.rows()) * lev.maxCoeff();
}

double estimate_decay_exponent(const Matrix& kernel, std::size_t terms) {
  if (kernel.rows() == 0 || kernel.rows() != kernel.cols()) {
    throw InvalidArgument("kernel matrix must be square and nonempty");
  }
  const Vector ev = linalg::symmetric_eigenvalues(kernel / static_cast<double>(kernel.rows()));
  std::vector<double> sigma(ev.data(), ev.data() + ev.size());
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  const double cutoff = 1e-12 * sigma.front();
  std::size_t k = 0;
  while (k < sigma.size() && k < terms && sigma[k] > cutoff) ++k;
  if (k < 2) throw NumericalError("need two significant eigenvalues to estimate decay");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += std::log(static_cast<double>(i + 1));
    my += std::log(sigma[i]);
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double dx = std::log(static_cast<double>(i + 1)) - mx;
    sxy += dx * (std::log(sigma[i]) - my);
    sxx += dx * dx;
  }
  return -sxy / sxx;
}

DiagnosticsReport diagnose(const KernelSpec& kernel, const PointSet& x, const IndexList& landmarks,
                           double gamma, double sample_m, double lambda0, double eta) {
  DiagnosticsReport report;
  report.gamma = gamma;
  const Matrix k_nn = gram(kernel, x);
  report.effective_dimension = effective_dimension(k_nn, gamma);
  report.leverages = point_leverage(k_nn, gamma);
  const PointSet lm = select_rows(x, landmarks);
  report.nystrom_gap_sq = nystrom_gap(k_nn, gram(kernel, x, lm), gram(kernel, lm));
  report.kappa_sq = k_nn.diagonal().maxCoeff();
  report.sample_condition_ok = check_sample_condition(sample_m, report.kappa_sq, lambda0, eta);
  return report;
}

GridSearchResult grid_search(const Dataset& data, const KernelSpec& kernel,
                             const GridSearchOptions& options) {
  if (options.lambda0_grid.empty() || options.lambda1_grid.empty()) {
    throw InvalidArgument("parameter grids must be nonempty");
  }
  if (options.folds < 2) throw InvalidArgument("need at least 2 folds");
  if (options.folds > data.m()) throw InvalidArgument("more folds than labeled points");
  if (data.outputs() != 1) throw InvalidArgument("grid search expects scalar labels");

  std::vector<double> grid0 = options.lambda0_grid;
  std::vector<double> grid1 = options.lambda1_grid;
  std::sort(grid0.begin(), grid0.end());
  std::sort(grid1.begin(), grid1.end());
  grid0.erase(std::unique(grid0.begin(), grid0.end()), grid0.end());
  grid1.erase(std::unique(grid1.begin(), grid1.end()), grid1.end());

  const auto folds = kfold_split(data.m(), options.folds, FoldScheme::shuffled, options.seed);
  GridSearchResult result;
  std::vector<double> means(grid0.size() * grid1.size(), 0.0);

  for (std::size_t f = 0; f < folds.size(); ++f) {
    const Dataset train = make_subset(data.x, data.y, folds[f].train);
    const PointSet test_x = select_rows(data.x, folds[f].test);
    const Matrix test_y = select_rows(data.y, folds[f].test);
    auto graph = std::make_shared<const GraphPenalty>(laplacian(exp_weights(train.x, options.graph_b)));
    const std::size_t s = options.landmarks == 0 ? train.n() : std::min(options.landmarks, train.n());
    const IndexList lm = select_landmarks(train.n(), s, LandmarkMode::uniform, options.seed + f);

    for (std::size_t a = 0; a < grid0.size(); ++a) {
      for (std::size_t b = 0; b < grid1.size(); ++b) {
        RegularizationConfig config;
        config.lambda0 = grid0[a];
        config.scaling = options.scaling;
        config.graph_penalties.push_back({grid1[b], graph});
        const NystromModel model = fit_nystrom(train, lm, kernel, config);
        const Matrix pred = predict(model, test_x);
        double metric = 0.0;
        for (Eigen::Index i = 0; i < pred.rows(); ++i) {
          if (options.classification) {
            const double label = pred(i, 0) >= 0.0 ? 1.0 : -1.0;
            metric += label != test_y(i, 0) ? 1.0 : 0.0;
          } else {
            const double diff = pred(i, 0) - test_y(i, 0);
            metric += diff * diff;
          }
        }
        metric /= static_cast<double>(pred.rows());
        result.table.push_back({grid0[a], grid1[b], f, metric});
        means[a * grid1.size() + b] += metric / static_cast<double>(folds.size());
      }
    }
  }

  // Grids are ascending, so the first strict minimum honours the tie-break.
  std::size_t best = 0;
  for (std::size_t i = 1; i < means.size(); ++i) {
    if (means[i] < means[best]) best = i;
  }
  result.best_lambda0 = grid0[best / grid1.size()];
  result.best_lambda1 = grid1[best % grid1.size()];
  result.best_metric = means[best];
  return result;
}

void write_cv_table(std::ostream& out, const std::vector<CvCell>& table) {
  const auto old = out.precision(17);
  out << "lambda0,lambda1,fold,metric\n";
  for (const auto& cell : table) {
    out << cell.lambda0 << ',' << cell.lambda1 << ',' << cell.fold + 1 << ',' << cell.metric << '\n';
  }
  out.precision(old);
}

}  // namespace nysreg
