#ifndef NYSREG_MODELSEL_HPP
#define NYSREG_MODELSEL_HPP

#include "nysreg/dataset.hpp"
#include "nysreg/kernels.hpp"
#include "nysreg/solver.hpp"
#include "nysreg/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace nysreg {

// Spectral quantities use the empirical integral operator L_K ~ K/n.

/// N(gamma) = sum_i sigma_i / (sigma_i + gamma) over eigenvalues of K/n
/// (negative round-off eigenvalues are clipped to zero).
double effective_dimension(const Matrix& kernel, double gamma);

/// l_i = [(K/n)(K/n + gamma I)^-1]_ii. The leverages sum to
/// effective_dimension(K, gamma); n * l_i estimates N_{x_i}(gamma).
Vector point_leverage(const Matrix& kernel, double gamma);

/// Largest eigenvalue of the Schur complement (K_nn - K_ns K_ss^+ K_ns^T) / n,
/// clipped at 0: the squared projection gap of the landmark span.
double nystrom_gap(const Matrix& k_nn, const Matrix& k_ns, const Matrix& k_ss);

struct RateRuleConfig {
  double r = 0.5;            // Hoelder exponent of phi(t) = t^r, 0 <= r <= 1
  std::optional<double> b;   // eigenvalue decay exponent, b > 1
  double m = 0.0;            // sample size, m >= 2
};

struct ParameterChoice {
  double lambda0 = 0.0;
  double lambda_j = 0.0;
};

/// lambda0 = m^{-1/(2r+2)} without decay information and m^{-b/(2br+b+1)}
/// with it, capped at 1; lambda_j = lambda0^{3/2} * lambda0^r.
ParameterChoice parameter_rule(const RateRuleConfig& cfg);

/// 8 kappa^2 / sqrt(m) * log(4/eta) <= lambda0.
bool check_sample_condition(double m, double kappa_sq, double lambda0, double eta);

/// ceil(max{67 L, 5 n_inf L}) with L = log(12 kappa^2 / (lambda0 delta)),
/// clamped below at 1.
std::size_t recommend_subsample_size(double lambda0, double delta, double kappa_sq, double n_inf);

/// n * max_i point_leverage(K, lambda0 / 3), the empirical N_inf(lambda0/3).
double estimate_n_infinity(const Matrix& kernel, double lambda0);

/// Power-law decay exponent b of the eigenvalues of K/n: minus the
/// least-squares slope of log sigma_i against log i over the leading `terms`
/// eigenvalues (those above 1e-12 sigma_1). Needs at least two of them.
double estimate_decay_exponent(const Matrix& kernel, std::size_t terms = 10);

struct DiagnosticsReport {
  double gamma = 0.0;
  double effective_dimension = 0.0;
  Vector leverages;
  double nystrom_gap_sq = 0.0;
  double kappa_sq = 0.0;
  bool sample_condition_ok = false;
};

/// All diagnostics for one regularization level; `landmarks` index into `x`.
DiagnosticsReport diagnose(const KernelSpec& kernel, const PointSet& x, const IndexList& landmarks,
                           double gamma, double sample_m, double lambda0, double eta);

struct GridSearchOptions {
  std::vector<double> lambda0_grid;
  std::vector<double> lambda1_grid;
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  std::size_t landmarks = 0;  // 0 = every training point
  double graph_b = 1e-3;
  LaplacianScaling scaling = LaplacianScaling::times_m;
  bool classification = true;  // misclassification rate, else mean squared error
};

struct CvCell {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  std::size_t fold = 0;
  double metric = 0.0;
};

struct GridSearchResult {
  double best_lambda0 = 0.0;
  double best_lambda1 = 0.0;
  double best_metric = 0.0;
  std::vector<CvCell> table;
};

/// Shuffled k-fold cross-validation over lambda0 x lambda1 on the labeled
/// points of `data`. Ties are broken by the smallest lambda0, then lambda1.
GridSearchResult grid_search(const Dataset& data, const KernelSpec& kernel,
                             const GridSearchOptions& options);

/// CSV with header lambda0,lambda1,fold,metric.
void write_cv_table(std::ostream& out, const std::vector<CvCell>& table);

}  // namespace nysreg

#endif  // NYSREG_MODELSEL_HPP
