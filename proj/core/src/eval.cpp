#include "nysreg/eval.hpp"

#include "nysreg/aggregation.hpp"
#include "nysreg/errors.hpp"
#include "nysreg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>

namespace nysreg {

Ratio Ratio::of(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw InvalidArgument("ratio with zero denominator");
  const std::uint64_t g = std::gcd(num, den);
  return g == 0 ? Ratio{0, 1} : Ratio{num / g, den / g};
}

Vector decide(const Eigen::Ref<const Vector>& scores) {
  Vector out(scores.size());
  for (Eigen::Index i = 0; i < scores.size(); ++i) out(i) = scores(i) >= 0.0 ? 1.0 : -1.0;
  return out;
}

ConfusionMatrix confusion(const Eigen::Ref<const Vector>& predictions,
                          const Eigen::Ref<const Vector>& labels) {
  if (predictions.size() != labels.size()) {
    throw InvalidArgument("prediction and label vectors differ in length");
  }
  ConfusionMatrix cm;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    const double p = predictions(i);
    const double y = labels(i);
    if ((p != 1.0 && p != -1.0) || (y != 1.0 && y != -1.0)) {
      throw InvalidArgument("labels and predictions must be -1 or +1");
    }
    if (y > 0) {
      (p > 0 ? cm.tp : cm.fn) += 1;
    } else {
      (p > 0 ? cm.fp : cm.tn) += 1;
    }
  }
  return cm;
}

namespace {

std::optional<Ratio> maybe_ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return Ratio::of(num, den);
}

}  // namespace

Metrics metrics(const ConfusionMatrix& cm) {
  Metrics out;
  out.accuracy = maybe_ratio(cm.tp + cm.tn, cm.total());
  out.precision = maybe_ratio(cm.tp, cm.tp + cm.fp);
  out.sensitivity = maybe_ratio(cm.tp, cm.tp + cm.fn);
  out.specificity = maybe_ratio(cm.tn, cm.fp + cm.tn);
  out.f_measure = maybe_ratio(2 * cm.tp, 2 * cm.tp + cm.fn + cm.fp);
  return out;
}

namespace {

CvSummary summarize(const std::vector<double>& values) {
  CvSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::string nystrom_name(std::size_t s) { return "nystrom_s" + std::to_string(s); }

}  // namespace

CvSummary CvReport::accuracy(const std::string& estimator, std::size_t fold) const {
  std::vector<double> values;
  for (const auto& r : records) {
    if (r.estimator == estimator && r.fold == fold) {
      values.push_back(100.0 * metrics(r.cm).accuracy.value_or(Ratio{}).value());
    }
  }
  return summarize(values);
}

CvSummary CvReport::overall(const std::string& estimator, std::optional<Ratio> Metrics::*metric,
                            double scale) const {
  std::vector<double> values;
  for (const auto& r : records) {
    if (r.estimator != estimator) continue;
    const auto value = metrics(r.cm).*metric;
    if (value) values.push_back(scale * value->value());
  }
  return summarize(values);
}

CvReport run_cv(const Dataset& data, const KernelSpec& kernel, const CvOptions& options) {
  data.validate();
  if (data.m() != data.n()) throw InvalidArgument("cross-validation needs a fully labeled dataset");
  if (data.outputs() != 1) throw InvalidArgument("cross-validation expects scalar +1/-1 labels");
  for (Eigen::Index i = 0; i < data.y.rows(); ++i) {
    if (data.y(i, 0) != 1.0 && data.y(i, 0) != -1.0) {
      throw DataError("labels must be -1 or +1 (row " + std::to_string(i + 1) + ")");
    }
  }
  if (options.folds < 2) throw InvalidArgument("need at least 2 folds");
  if (options.folds > data.n()) throw InvalidArgument("more folds than points");
  if (options.redraws == 0 && !options.subsample_sizes.empty()) {
    throw InvalidArgument("redraws must be positive");
  }
  if (!options.include_full && options.subsample_sizes.empty()) {
    throw InvalidArgument("no estimator selected");
  }

  std::vector<Fold> folds;
  CvReport report;
  if (options.protocol == CvProtocol::paper_sequential) {
    folds = paper_protocol_splits(data.n(), options.folds);
    report.protocol = "paper";
  } else {
    folds = kfold_split(data.n(), options.folds, FoldScheme::shuffled, options.seed);
    report.protocol = "kfold";
  }
  report.folds = folds.size();
  if (options.include_full) {
    report.estimators.push_back("single_penalty");
    report.estimators.push_back("multi_penalty");
  }
  for (std::size_t s : options.subsample_sizes) report.estimators.push_back(nystrom_name(s));
  if (options.subsample_sizes.size() > 1) report.estimators.push_back("aggregate");

  for (std::size_t f = 0; f < folds.size(); ++f) {
    Dataset train = make_subset(data.x, data.y, folds[f].train);
    PointSet test_x = select_rows(data.x, folds[f].test);
    const Matrix test_y = select_rows(data.y, folds[f].test);
    const Vector labels = test_y.col(0);
    if (options.scale_per_fold) {
      const MinMaxScaler scaler = MinMaxScaler::fit(train.x);
      train.x = scaler.transform(train.x);
      test_x = scaler.transform(test_x);
    }
    for (std::size_t s : options.subsample_sizes) {
      if (s == 0 || s > train.n()) {
        throw InvalidArgument("subsample size " + std::to_string(s) + " outside [1, " +
                              std::to_string(train.n()) + "]");
      }
    }
    auto graph =
        std::make_shared<const GraphPenalty>(laplacian(exp_weights(train.x, options.graph_b)));
    RegularizationConfig single;
    single.lambda0 = options.lambda0;
    single.scaling = options.scaling;
    RegularizationConfig multi = single;
    multi.graph_penalties.push_back({options.lambda1, graph});

    auto score = [&](const Matrix& pred) { return confusion(decide(pred.col(0)), labels); };

    if (options.include_full) {
      report.records.push_back({f, "single_penalty", 0, score(predict(fit_full(train, kernel, single), test_x)), {}, {}});
      report.records.push_back({f, "multi_penalty", 0, score(predict(fit_full(train, kernel, multi), test_x)), {}, {}});
    }
    for (std::size_t draw = 0; draw < options.redraws && !options.subsample_sizes.empty(); ++draw) {
      std::vector<NystromModel> members;
      std::vector<Matrix> test_values;
      for (std::size_t k = 0; k < options.subsample_sizes.size(); ++k) {
        const std::size_t s = options.subsample_sizes[k];
        const std::uint64_t seed =
            options.seed + 1000003ULL * f + 7919ULL * draw + 104729ULL * k;
        const IndexList lm = select_landmarks(train.n(), s, LandmarkMode::uniform, seed);
        members.push_back(fit_nystrom(train, lm, kernel, multi));
        test_values.push_back(predict(members.back(), test_x));
        report.records.push_back({f, nystrom_name(s), draw, score(test_values.back()), {}, {}});
      }
      if (members.size() > 1) {
        std::vector<Matrix> train_values;
        for (const auto& model : members) train_values.push_back(predict(model, train.x));
        const LfsSolution lfs = solve_lfs(train_values, train.y);
        double best = lfs.proxy(Vector::Unit(static_cast<Eigen::Index>(members.size()), 0));
        for (std::size_t i = 1; i < members.size(); ++i) {
          best = std::min(best, lfs.proxy(Vector::Unit(static_cast<Eigen::Index>(members.size()),
                                                      static_cast<Eigen::Index>(i))));
        }
        CvRecord rec{f, "aggregate", draw, score(combine_predictions(test_values, lfs.cbar)), {}, {}};
        rec.proxy = lfs.proxy(lfs.cbar);
        rec.best_member_proxy = best;
        report.records.push_back(rec);
      }
    }
  }
  return report;
}

namespace {

std::string human(double value) {
  std::ostringstream os;
  os << std::setprecision(4) << value;
  return os.str();
}

std::string exact(double value) {
  std::ostringstream os;
  os << std::setprecision(17) << value;
  return os.str();
}

std::string ratio_text(const std::optional<Ratio>& r) {
  if (!r) return "NA";
  return std::to_string(r->num) + "/" + std::to_string(r->den);
}

}  // namespace

void write_cv_wide(std::ostream& out, const CvReport& report) {
  out << "estimator";
  for (std::size_t f = 0; f < report.folds; ++f) out << ",fold" << f + 1;
  out << '\n';
  for (const auto& name : report.estimators) {
    out << name;
    for (std::size_t f = 0; f < report.folds; ++f) {
      const CvSummary s = report.accuracy(name, f);
      out << ',' << human(s.mean) << " (" << human(s.stddev) << ')';
    }
    out << '\n';
  }
}

void write_cv_summary(std::ostream& out, const CvReport& report) {
  out << "estimator,accuracy,precision,sensitivity,specificity,f_measure\n";
  for (const auto& name : report.estimators) {
    out << name;
    for (auto metric : {&Metrics::accuracy, &Metrics::precision, &Metrics::sensitivity,
                        &Metrics::specificity, &Metrics::f_measure}) {
      const CvSummary s = report.overall(name, metric, 100.0);
      if (s.count == 0) {
        out << ",NA";
      } else {
        out << ',' << human(s.mean) << " (" << human(s.stddev) << ')';
      }
    }
    out << '\n';
  }
}

void write_cv_long(std::ostream& out, const CvReport& report) {
  out << "protocol,fold,estimator,draw,tp,fn,fp,tn,accuracy,precision,sensitivity,specificity,"
         "f_measure,proxy,best_member_proxy\n";
  for (const auto& r : report.records) {
    const Metrics m = metrics(r.cm);
    out << report.protocol << ',' << r.fold + 1 << ',' << r.estimator << ',' << r.draw << ','
        << r.cm.tp << ',' << r.cm.fn << ',' << r.cm.fp << ',' << r.cm.tn << ','
        << ratio_text(m.accuracy) << ',' << ratio_text(m.precision) << ','
        << ratio_text(m.sensitivity) << ',' << ratio_text(m.specificity) << ','
        << ratio_text(m.f_measure) << ',' << (r.proxy ? exact(*r.proxy) : "NA") << ','
        << (r.best_member_proxy ? exact(*r.best_member_proxy) : "NA") << '\n';
  }
}

std::size_t rate_subsample_size(std::size_t m) {
  if (m < 2) throw InvalidArgument("rate harness needs m >= 2");
  const double md = static_cast<double>(m);
  const double s = std::ceil(2.0 * std::sqrt(md) * std::log(md));
  return std::min(m, static_cast<std::size_t>(s));
}

double loglog_slope(const std::vector<std::size_t>& sizes, const std::vector<double>& errors) {
  if (sizes.size() != errors.size() || sizes.size() < 2) {
    throw InvalidArgument("slope needs at least two (size, error) pairs");
  }
  const std::size_t k = sizes.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (sizes[i] == 0 || !(errors[i] > 0.0)) throw InvalidArgument("slope needs positive values");
    mx += std::log(static_cast<double>(sizes[i]));
    my += std::log(errors[i]);
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double dx = std::log(static_cast<double>(sizes[i])) - mx;
    sxy += dx * (std::log(errors[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw InvalidArgument("slope needs distinct sizes");
  return sxy / sxx;
}

RateReport rate_experiment(const SyntheticTarget& target, const RateRuleConfig& cfg,
                           const RateOptions& options) {
  if (options.sample_sizes.size() < 3) throw InvalidArgument("need at least three sample sizes");
  for (std::size_t k = 0; k < options.sample_sizes.size(); ++k) {
    if (options.sample_sizes[k] < 50) throw InvalidArgument("sample sizes must be at least 50");
    if (k > 0 && options.sample_sizes[k] <= options.sample_sizes[k - 1]) {
      throw InvalidArgument("sample sizes must be strictly increasing");
    }
  }
  if (options.trials == 0 || options.test_points == 0) {
    throw InvalidArgument("trials and test points must be positive");
  }
  RateReport report;
  report.sample_sizes = options.sample_sizes;
  report.errors.assign(options.sample_sizes.size(), 0.0);
  const std::size_t d = static_cast<std::size_t>(target.anchors.cols());
  const KernelSpec kernel = options.kernel.value_or(target.kernel);
  RateRuleConfig rule = cfg;
  if (!rule.b && options.measure_decay) {
    const PointSet probe = uniform_points(options.decay_points, d, options.seed + 5555555ULL);
    const double b = estimate_decay_exponent(gram(kernel, probe));
    if (!(b > 1.0)) throw NumericalError("measured eigenvalue decay exponent " + exact(b) + " is not above 1");
    rule.b = b;
  }
  report.decay_exponent = rule.b;
  if (rule.b) {
    const double b = *rule.b;
    report.theoretical_exponent = -(b * (rule.r + 0.5)) / (2.0 * b * rule.r + b + 1.0);
  } else {
    report.theoretical_exponent = -(rule.r + 0.5) / (2.0 * rule.r + 2.0);
  }
  for (std::size_t t = 0; t < options.trials; ++t) {
    std::vector<double> errs;
    const PointSet test = uniform_points(options.test_points, d, options.seed + 7777777ULL + t);
    const Vector truth = target.evaluate(test);
    for (std::size_t k = 0; k < options.sample_sizes.size(); ++k) {
      const std::size_t m = options.sample_sizes[k];
      const std::uint64_t seed = options.seed + 1000003ULL * t + 7919ULL * k;
      const SyntheticSample sample = gen_synthetic(target, m, m, seed);
      RateRuleConfig at_m = rule;
      at_m.m = static_cast<double>(m);
      const ParameterChoice choice = parameter_rule(at_m);
      RegularizationConfig config;
      config.lambda0 = choice.lambda0;
      config.scaling = options.scaling;
      config.graph_penalties.push_back(
          {choice.lambda_j / static_cast<double>(m),
           std::make_shared<const GraphPenalty>(laplacian(exp_weights(sample.data.x, options.graph_b)))});
      const IndexList lm =
          select_landmarks(m, rate_subsample_size(m), LandmarkMode::uniform, seed ^ 0x5bd1e995ULL);
      const NystromModel model =
          fit_nystrom(sample.data, lm, kernel, config);
      const Vector diff = predict(model, test).col(0) - truth;
      const double err = std::sqrt(diff.squaredNorm() / static_cast<double>(diff.size()));
      if (!(err > 0.0) || !std::isfinite(err)) {
        throw NumericalError("degenerate fit: error estimate " + exact(err) + " at m = " +
                             std::to_string(m));
      }
      errs.push_back(err);
      report.errors[k] += err / static_cast<double>(options.trials);
    }
    report.trial_slopes.push_back(loglog_slope(options.sample_sizes, errs));
    report.trial_errors.push_back(std::move(errs));
  }
  report.slope = std::accumulate(report.trial_slopes.begin(), report.trial_slopes.end(), 0.0) /
                 static_cast<double>(report.trial_slopes.size());
  return report;
}

SyntheticTarget default_rate_target() {
  SyntheticTarget target;
  target.anchors = PointSet(5, 1);
  target.anchors << 0.1, 0.3, 0.5, 0.7, 0.9;
  target.amplitudes = Vector(5);
  target.amplitudes << 1.0, -0.8, 0.6, -1.2, 0.9;
  target.kernel = KernelSpec::gaussian(10.0);
  target.noise_sigma = 0.1;
  return target;
}

void write_rate_report(std::ostream& out, const RateReport& report) {
  out << "m,s,mean_error";
  for (std::size_t t = 0; t < report.trial_errors.size(); ++t) out << ",trial" << t + 1;
  out << '\n';
  for (std::size_t k = 0; k < report.sample_sizes.size(); ++k) {
    out << report.sample_sizes[k] << ',' << rate_subsample_size(report.sample_sizes[k]) << ','
        << exact(report.errors[k]);
    for (const auto& trial : report.trial_errors) out << ',' << exact(trial[k]);
    out << '\n';
  }
  out << "slope," << exact(report.slope) << '\n';
  out << "theoretical_exponent," << exact(report.theoretical_exponent) << '\n';
  if (report.decay_exponent) out << "decay_exponent," << exact(*report.decay_exponent) << '\n';
}

}  // namespace nysreg
