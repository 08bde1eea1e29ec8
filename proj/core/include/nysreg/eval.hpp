#ifndef NYSREG_EVAL_HPP
#define NYSREG_EVAL_HPP

#include "nysreg/data.hpp"
#include "nysreg/dataset.hpp"
#include "nysreg/kernels.hpp"
#include "nysreg/modelsel.hpp"
#include "nysreg/solver.hpp"
#include "nysreg/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nysreg {

/// Exact nonnegative fraction kept in lowest terms.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Ratio of(std::uint64_t num, std::uint64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// Positive class is +1 (attack).
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fn = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fn + fp + tn; }
};

/// Undefined metrics (zero denominator) are left empty, never reported as 0.
struct Metrics {
  std::optional<Ratio> accuracy;
  std::optional<Ratio> precision;
  std::optional<Ratio> sensitivity;
  std::optional<Ratio> specificity;
  std::optional<Ratio> f_measure;
};

/// +1 where score >= 0, -1 otherwise.
Vector decide(const Eigen::Ref<const Vector>& scores);

/// Counts the four cells; both vectors must hold only -1 and +1.
ConfusionMatrix confusion(const Eigen::Ref<const Vector>& predictions,
                          const Eigen::Ref<const Vector>& labels);

/// accuracy (TP+TN)/total, precision TP/(TP+FP), sensitivity TP/(TP+FN),
/// specificity TN/(FP+TN), F = 2TP/(2TP+FN+FP).
Metrics metrics(const ConfusionMatrix& cm);

enum class CvProtocol { paper_sequential, kfold };

struct CvOptions {
  CvProtocol protocol = CvProtocol::paper_sequential;
  std::size_t folds = 10;
  std::vector<std::size_t> subsample_sizes{10, 50, 250};
  std::size_t redraws = 50;
  std::uint64_t seed = 0;
  double lambda0 = 1e-8;
  double lambda1 = 1.0;
  double graph_b = 1e-3;
  LaplacianScaling scaling = LaplacianScaling::times_m;
  bool include_full = true;       // single- and multi-penalty full solutions
  bool scale_per_fold = false;    // min-max statistics from each training fold
};

/// One fitted estimator on one fold and one landmark draw.
struct CvRecord {
  std::size_t fold = 0;  // 0-based
  std::string estimator;
  std::size_t draw = 0;
  ConfusionMatrix cm;
  // Aggregate only: training LFS proxy Q(cbar) and min_i Q(e_i).
  std::optional<double> proxy;
  std::optional<double> best_member_proxy;
};

struct CvSummary {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

struct CvReport {
  std::string protocol;
  std::size_t folds = 0;
  std::vector<std::string> estimators;
  std::vector<CvRecord> records;

  /// Mean and sample standard deviation of accuracy (percent) over draws.
  CvSummary accuracy(const std::string& estimator, std::size_t fold) const;
  /// Per-estimator statistics of a metric over all folds and draws.
  CvSummary overall(const std::string& estimator, std::optional<Ratio> Metrics::*metric,
                    double scale = 1.0) const;
};

/// Cross-validates single-penalty and multi-penalty full solutions, Nystrom
/// solutions for every subsample size (redrawn `redraws` times) and their LFS
/// aggregate. `data` must be fully labeled with +1/-1.
CvReport run_cv(const Dataset& data, const KernelSpec& kernel, const CvOptions& options);

/// Estimator x fold table of "mean (stddev)" accuracy cells, 4 significant digits.
void write_cv_wide(std::ostream& out, const CvReport& report);
/// Per-estimator metrics over all folds, 4 significant digits.
void write_cv_summary(std::ostream& out, const CvReport& report);
/// One line per record with counts and metrics at 17 significant digits.
void write_cv_long(std::ostream& out, const CvReport& report);

struct RateOptions {
  std::vector<std::size_t> sample_sizes{100, 200, 400, 800, 1600};
  std::size_t trials = 5;
  std::uint64_t seed = 0;
  std::size_t test_points = 2000;
  double graph_b = 1e-4;
  LaplacianScaling scaling = LaplacianScaling::none;
  std::optional<KernelSpec> kernel;  // fitting kernel; defaults to the target's
  bool measure_decay = false;        // estimate b from the kernel spectrum when cfg.b is unset
  std::size_t decay_points = 500;
};

struct RateReport {
  std::vector<std::size_t> sample_sizes;
  std::vector<std::vector<double>> trial_errors;  // [trial][size]
  std::vector<double> errors;                     // mean over trials
  std::vector<double> trial_slopes;
  double slope = 0.0;                             // mean of trial slopes
  double theoretical_exponent = 0.0;
  std::optional<double> decay_exponent;           // b used by the parameter rule
};

/// Subsample size ceil(2 sqrt(m) log m) used by the rate harness.
std::size_t rate_subsample_size(std::size_t m);

/// Least-squares slope of log(errors) against log(sizes).
double loglog_slope(const std::vector<std::size_t>& sizes, const std::vector<double>& errors);

/// For every m: draw m labeled points, fit the Nystrom multi-penalty
/// estimator with parameter_rule(cfg at m) and rate_subsample_size(m)
/// landmarks, and estimate |f - f_H|_rho as the root mean square deviation on
/// fresh uniform points. The graph term is a Laplacian over the sample with
/// weight lambda_j / m, which keeps the penalty operator bounded as m grows.
RateReport rate_experiment(const SyntheticTarget& target, const RateRuleConfig& cfg,
                           const RateOptions& options);

/// Planted target used by the rate harness: five anchors in [0,1], Gaussian
/// kernel with gamma = 10, noise 0.1.
SyntheticTarget default_rate_target();

void write_rate_report(std::ostream& out, const RateReport& report);

}  // namespace nysreg

#endif  // NYSREG_EVAL_HPP
