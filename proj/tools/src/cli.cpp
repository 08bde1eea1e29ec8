#include "nysreg_cli/cli.hpp"

#include "nysreg/aggregation.hpp"
#include "nysreg/data.hpp"
#include "nysreg/errors.hpp"
#include "nysreg/eval.hpp"
#include "nysreg/graph.hpp"
#include "nysreg/kernels.hpp"
#include "nysreg/model_io.hpp"
#include "nysreg/modelsel.hpp"
#include "nysreg/multiview.hpp"
#include "nysreg/solver.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace nysreg::cli {

namespace {

struct RunConfig {
  std::string data;
  std::string test;
  std::string model;
  std::vector<std::string> models;
  std::string out;
  std::string long_out;
  std::string truth_out;
  bool header = false;
  int label_column = -1;
  std::optional<std::size_t> labeled;
  std::optional<std::size_t> max_rows;

  std::string kernel = "gaussian:0.04";
  double lambda0 = 1e-8;
  double lambda1 = 1.0;
  double graph_b = 1e-3;
  std::size_t knn = 0;
  std::string scaling = "times_m";
  std::vector<std::size_t> landmarks;
  std::string landmark_mode = "uniform";
  std::uint64_t seed = 0;

  // cross-validate / grid-search
  std::string protocol = "paper";
  std::size_t folds = 10;
  std::size_t redraws = 50;
  bool no_full = false;
  bool nslkdd = false;
  std::vector<double> lambda0_grid;
  std::vector<double> lambda1_grid;
  bool regression = false;

  // diagnose
  std::vector<double> gamma_grid;
  double eta = 0.05;

  // rate-check
  std::vector<std::size_t> sizes{100, 200, 400, 800, 1600};
  std::size_t trials = 5;
  double r = 0.5;
  std::optional<double> decay_b;
  std::size_t test_points = 2000;
  bool measure_decay = false;

  // synthetic
  std::size_t n = 100;
  std::size_t dim = 1;
  std::size_t anchors = 5;
  double target_gamma = 10.0;
  double noise = 0.1;

  // multiview
  std::vector<std::string> views;
  std::vector<std::string> view_kernels;
  double lambda_a = 1e-5;
  double lambda_b = 1e-6;
  double lambda_w = 1e-6;
  double alpha = 1.0;
  std::size_t classes = 0;
  bool optimize = false;

  bool kernel_given = false;
  bool target_gamma_given = false;
  bool noise_given = false;
};

std::string exact(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string human(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

/// Writes to --out when given, otherwise to the command's output stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw DataError("cannot write " + path);
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }
  void finish() {
    if (file_.is_open()) {
      file_.flush();
      if (!file_) throw DataError("write failed");
    }
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void need(const std::string& value, const char* flag, const char* command) {
  if (value.empty()) {
    throw InvalidArgument(std::string(command) + " requires " + flag);
  }
}

LaplacianScaling scaling_of(const RunConfig& cfg) {
  if (cfg.scaling == "times_m") return LaplacianScaling::times_m;
  if (cfg.scaling == "none") return LaplacianScaling::none;
  throw InvalidArgument("--scaling must be times_m or none");
}

LandmarkMode mode_of(const RunConfig& cfg) {
  if (cfg.landmark_mode == "uniform") return LandmarkMode::uniform;
  if (cfg.landmark_mode == "first") return LandmarkMode::first_s;
  throw InvalidArgument("--landmark-mode must be uniform or first");
}

Dataset load_data(const RunConfig& cfg, const std::string& path) {
  CsvOptions opts;
  opts.has_header = cfg.header;
  opts.label_column = cfg.label_column;
  opts.labeled_count = cfg.labeled;
  opts.max_rows = cfg.max_rows;
  return load_csv(path, opts);
}

std::shared_ptr<const GraphPenalty> graph_for(const RunConfig& cfg, const PointSet& x) {
  Matrix w = exp_weights(x, cfg.graph_b);
  if (cfg.knn > 0) w = knn_truncate(w, cfg.knn);
  return std::make_shared<const GraphPenalty>(laplacian(w));
}

RegularizationConfig regularization(const RunConfig& cfg, const PointSet& x) {
  RegularizationConfig reg;
  reg.lambda0 = cfg.lambda0;
  reg.scaling = scaling_of(cfg);
  if (cfg.lambda1 > 0.0) reg.graph_penalties.push_back({cfg.lambda1, graph_for(cfg, x)});
  if (cfg.lambda1 < 0.0) throw InvalidArgument("--lambda1 must be nonnegative");
  return reg;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out) {
  need(cfg.data, "--data", "fit");
  need(cfg.out, "--out", "fit");
  const Dataset data = load_data(cfg, cfg.data);
  const KernelSpec kernel = parse_kernel_spec(cfg.kernel);
  const RegularizationConfig reg = regularization(cfg, data.x);

  if (cfg.landmarks.empty()) {
    const NystromModel model = fit_full(data, kernel, reg);
    save_model(cfg.out, model);
    out << "full model: n=" << data.n() << " m=" << data.m() << " written to " << cfg.out << '\n';
    return ok;
  }
  std::vector<NystromModel> members;
  for (std::size_t k = 0; k < cfg.landmarks.size(); ++k) {
    const IndexList lm = select_landmarks(data.n(), cfg.landmarks[k], mode_of(cfg), cfg.seed + k);
    members.push_back(fit_nystrom(data, lm, kernel, reg));
  }
  if (members.size() == 1) {
    save_model(cfg.out, members.front());
    out << "nystrom model: s=" << cfg.landmarks.front() << " n=" << data.n() << " m=" << data.m()
        << " written to " << cfg.out << '\n';
    return ok;
  }
  const AggregatedModel agg = aggregate_lfs(std::move(members), data);
  save_model(cfg.out, agg);
  out << "aggregated model:";
  for (Eigen::Index i = 0; i < agg.cbar.size(); ++i) {
    out << " s=" << cfg.landmarks[static_cast<std::size_t>(i)] << " c=" << human(agg.cbar(i));
  }
  out << " written to " << cfg.out << '\n';
  return ok;
}

int cmd_predict(const RunConfig& cfg, std::ostream& out) {
  need(cfg.model, "--model", "predict");
  need(cfg.data, "--data", "predict");
  const AnyModel model = load_model(cfg.model);
  const PointSet queries = load_points(cfg.data, cfg.header);
  if (static_cast<std::size_t>(queries.cols()) != model.dim()) {
    throw DataError("query points have " + std::to_string(queries.cols()) +
                    " columns, model expects " + std::to_string(model.dim()));
  }
  Sink sink(cfg.out, out);
  write_csv(sink.get(), model.predict(queries));
  sink.finish();
  return ok;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  need(cfg.model, "--model", "evaluate");
  need(cfg.data, "--data", "evaluate");
  const AnyModel model = load_model(cfg.model);
  const Dataset data = load_data(cfg, cfg.data);
  if (data.m() == 0) throw DataError("evaluate needs labeled rows");
  const PointSet x = data.x.topRows(static_cast<Eigen::Index>(data.m()));
  const Matrix pred = model.predict(x);
  const ConfusionMatrix cm = confusion(decide(pred.col(0)), data.y.col(0));
  const Metrics mt = metrics(cm);
  Sink sink(cfg.out, out);
  auto& os = sink.get();
  os << "tp,fn,fp,tn\n" << cm.tp << ',' << cm.fn << ',' << cm.fp << ',' << cm.tn << '\n';
  os << "metric,exact,value\n";
  const std::pair<const char*, const std::optional<Ratio>*> rows[] = {
      {"accuracy", &mt.accuracy},       {"precision", &mt.precision},
      {"sensitivity", &mt.sensitivity}, {"specificity", &mt.specificity},
      {"f_measure", &mt.f_measure}};
  for (const auto& [name, value] : rows) {
    os << name << ',';
    if (*value) {
      os << (*value)->num << '/' << (*value)->den << ',' << human((*value)->value()) << '\n';
    } else {
      os << "NA,NA\n";
    }
  }
  sink.finish();
  return ok;
}

int cmd_cross_validate(const RunConfig& cfg, std::ostream& out) {
  need(cfg.data, "--data", "cross-validate");
  Dataset data;
  CvOptions opts;
  if (cfg.nslkdd) {
    const NslKddData nsl = preprocess_nslkdd(read_csv_table(cfg.data, cfg.header, cfg.max_rows));
    data.x = nsl.encoded;
    data.y = nsl.labels;
    opts.scale_per_fold = true;
  } else {
    RunConfig all = cfg;
    all.labeled.reset();
    data = load_data(all, cfg.data);
  }
  if (cfg.protocol == "paper") {
    opts.protocol = CvProtocol::paper_sequential;
  } else if (cfg.protocol == "kfold") {
    opts.protocol = CvProtocol::kfold;
  } else {
    throw InvalidArgument("--protocol must be paper or kfold");
  }
  opts.folds = cfg.folds;
  opts.subsample_sizes = cfg.landmarks.empty() ? std::vector<std::size_t>{10, 50, 250} : cfg.landmarks;
  opts.redraws = cfg.redraws;
  opts.seed = cfg.seed;
  opts.lambda0 = cfg.lambda0;
  opts.lambda1 = cfg.lambda1;
  opts.graph_b = cfg.graph_b;
  opts.scaling = scaling_of(cfg);
  opts.include_full = !cfg.no_full;
  const CvReport report = run_cv(data, parse_kernel_spec(cfg.kernel), opts);

  Sink sink(cfg.out, out);
  write_cv_wide(sink.get(), report);
  sink.get() << '\n';
  write_cv_summary(sink.get(), report);
  sink.finish();
  if (!cfg.long_out.empty()) {
    Sink long_sink(cfg.long_out, out);
    write_cv_long(long_sink.get(), report);
    long_sink.finish();
  }
  return ok;
}

int cmd_aggregate(const RunConfig& cfg, std::ostream& out) {
  need(cfg.data, "--data", "aggregate");
  need(cfg.out, "--out", "aggregate");
  if (cfg.models.size() < 2) throw InvalidArgument("aggregate requires at least two --models");
  std::vector<NystromModel> members;
  for (const auto& path : cfg.models) {
    AnyModel m = load_model(path);
    auto* single = std::get_if<NystromModel>(&m.model);
    if (single == nullptr) throw DataError(path + " is already an aggregate");
    members.push_back(std::move(*single));
  }
  const Dataset data = load_data(cfg, cfg.data);
  const AggregatedModel agg = aggregate_lfs(std::move(members), data);
  save_model(cfg.out, agg);
  out << "weights";
  for (Eigen::Index i = 0; i < agg.cbar.size(); ++i) out << ' ' << exact(agg.cbar(i));
  out << '\n';
  return ok;
}

int cmd_diagnose(const RunConfig& cfg, std::ostream& out) {
  need(cfg.data, "--data", "diagnose");
  const Dataset data = load_data(cfg, cfg.data);
  const KernelSpec kernel = parse_kernel_spec(cfg.kernel);
  std::size_t s = data.n();
  if (!cfg.landmarks.empty()) {
    if (cfg.landmarks.size() != 1) throw InvalidArgument("diagnose takes one --landmarks value");
    s = cfg.landmarks.front();
  }
  const IndexList lm = select_landmarks(data.n(), s, mode_of(cfg), cfg.seed);
  std::vector<double> grid = cfg.gamma_grid;
  if (grid.empty()) grid.push_back(cfg.lambda0 / 3.0);
  const Matrix k = gram(kernel, data.x);
  const double n_inf = estimate_n_infinity(k, cfg.lambda0);

  Sink sink(cfg.out, out);
  auto& os = sink.get();
  os << "gamma,effective_dimension,max_leverage\n";
  DiagnosticsReport last;
  for (double gamma : grid) {
    last = diagnose(kernel, data.x, lm, gamma, static_cast<double>(std::max<std::size_t>(data.m(), 1)),
                    cfg.lambda0, cfg.eta);
    os << exact(gamma) << ',' << exact(last.effective_dimension) << ','
       << exact(last.leverages.size() > 0 ? last.leverages.maxCoeff() : 0.0) << '\n';
  }
  os << "landmarks," << s << '\n';
  os << "nystrom_gap," << exact(last.nystrom_gap_sq) << '\n';
  os << "kappa_sq," << exact(last.kappa_sq) << '\n';
  os << "n_infinity," << exact(n_inf) << '\n';
  os << "sample_condition," << (last.sample_condition_ok ? "ok" : "violated") << '\n';
  os << "recommended_landmarks,"
     << recommend_subsample_size(cfg.lambda0, cfg.eta, last.kappa_sq, n_inf) << '\n';
  sink.finish();
  return ok;
}

int cmd_rate_check(const RunConfig& cfg, std::ostream& out) {
  RateRuleConfig rule;
  rule.r = cfg.r;
  rule.b = cfg.decay_b;
  RateOptions opts;
  opts.sample_sizes = cfg.sizes;
  opts.trials = cfg.trials;
  opts.seed = cfg.seed;
  opts.test_points = cfg.test_points;
  opts.graph_b = cfg.graph_b;
  opts.scaling = scaling_of(cfg);
  opts.measure_decay = cfg.measure_decay;
  if (cfg.kernel_given) opts.kernel = parse_kernel_spec(cfg.kernel);
  SyntheticTarget target = default_rate_target();
  if (cfg.target_gamma_given) target.kernel = KernelSpec::gaussian(cfg.target_gamma);
  if (cfg.noise_given) target.noise_sigma = cfg.noise;
  const RateReport report = rate_experiment(target, rule, opts);
  Sink sink(cfg.out, out);
  write_rate_report(sink.get(), report);
  const bool inside = report.slope < 0.0 && report.slope >= -0.60 && report.slope <= -0.15;
  sink.get() << "within_band," << (inside ? "yes" : "no") << '\n';
  sink.finish();
  return ok;
}

int cmd_synthetic(const RunConfig& cfg, std::ostream& out) {
  if (cfg.dim == 0 || cfg.anchors == 0) throw InvalidArgument("--dim and --anchors must be positive");
  const std::size_t m = cfg.labeled.value_or(cfg.n);
  SyntheticTarget target;
  target.anchors = uniform_points(cfg.anchors, cfg.dim, cfg.seed);
  std::mt19937_64 rng(cfg.seed + 1);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  target.amplitudes.resize(static_cast<Eigen::Index>(cfg.anchors));
  for (Eigen::Index i = 0; i < target.amplitudes.size(); ++i) target.amplitudes(i) = amp(rng);
  target.kernel = KernelSpec::gaussian(cfg.target_gamma);
  target.noise_sigma = cfg.noise;
  const SyntheticSample sample = gen_synthetic(target, m, cfg.n, cfg.seed + 2);
  Sink sink(cfg.out, out);
  write_dataset_csv(sink.get(), sample.data);
  sink.finish();
  if (!cfg.truth_out.empty()) {
    Sink truth(cfg.truth_out, out);
    write_csv(truth.get(), Matrix(sample.truth));
    truth.finish();
  }
  return ok;
}

int cmd_grid_search(const RunConfig& cfg, std::ostream& out) {
  need(cfg.data, "--data", "grid-search");
  const Dataset data = load_data(cfg, cfg.data);
  GridSearchOptions opts;
  opts.lambda0_grid = cfg.lambda0_grid.empty() ? std::vector<double>{cfg.lambda0} : cfg.lambda0_grid;
  opts.lambda1_grid = cfg.lambda1_grid.empty() ? std::vector<double>{cfg.lambda1} : cfg.lambda1_grid;
  opts.folds = cfg.folds;
  opts.seed = cfg.seed;
  if (cfg.landmarks.size() > 1) throw InvalidArgument("grid-search takes one --landmarks value");
  opts.landmarks = cfg.landmarks.empty() ? 0 : cfg.landmarks.front();
  opts.graph_b = cfg.graph_b;
  opts.scaling = scaling_of(cfg);
  opts.classification = !cfg.regression;
  const GridSearchResult result = grid_search(data, parse_kernel_spec(cfg.kernel), opts);
  Sink sink(cfg.out, out);
  write_cv_table(sink.get(), result.table);
  sink.finish();
  out << "best lambda0=" << exact(result.best_lambda0) << " lambda1=" << exact(result.best_lambda1)
      << " metric=" << exact(result.best_metric) << '\n';
  return ok;
}

std::vector<ViewSlice> parse_views(const std::vector<std::string>& specs, std::size_t dim) {
  std::vector<ViewSlice> slices;
  if (specs.empty()) {
    slices.push_back({0, dim});
    return slices;
  }
  for (const auto& text : specs) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw InvalidArgument("view '" + text + "' is not offset:width");
    try {
      std::size_t used = 0;
      const std::size_t offset = std::stoul(text.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument(text);
      const std::string rest = text.substr(colon + 1);
      const std::size_t width = std::stoul(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(text);
      slices.push_back({offset, width});
    } catch (const std::logic_error&) {
      throw InvalidArgument("view '" + text + "' is not offset:width");
    }
  }
  return slices;
}

int cmd_multiview(const RunConfig& cfg, std::ostream& out) {
  need(cfg.data, "--data", "multiview");
  Dataset data = load_data(cfg, cfg.data);
  if (data.m() == 0) throw DataError("multiview needs labeled rows");
  if (cfg.classes > 0) {
    std::vector<std::size_t> ids;
    for (Eigen::Index i = 0; i < data.y.rows(); ++i) {
      const double v = data.y(i, 0);
      if (v < 0.0 || v != std::floor(v) || v >= static_cast<double>(cfg.classes)) {
        throw DataError("row " + std::to_string(i + 1) + ": class label outside [0, " +
                        std::to_string(cfg.classes) + ")");
      }
      ids.push_back(static_cast<std::size_t>(v));
    }
    data.y = one_vs_rest_codes(ids, cfg.classes);
  }
  MultiViewKernel mvk;
  mvk.slices = parse_views(cfg.views, data.dim());
  const std::size_t v = mvk.slices.size();
  if (cfg.view_kernels.empty()) {
    mvk.views.assign(v, parse_kernel_spec(cfg.kernel));
  } else if (cfg.view_kernels.size() == 1) {
    mvk.views.assign(v, parse_kernel_spec(cfg.view_kernels.front()));
  } else if (cfg.view_kernels.size() == v) {
    for (const auto& k : cfg.view_kernels) mvk.views.push_back(parse_kernel_spec(k));
  } else {
    throw InvalidArgument("--view-kernels needs one kernel or one per view");
  }
  mvk.validate(data.dim());

  std::vector<GraphPenalty> per_view;
  for (const auto& slice : mvk.slices) {
    const PointSet xv = data.x.middleCols(static_cast<Eigen::Index>(slice.offset),
                                          static_cast<Eigen::Index>(slice.width));
    Matrix w = exp_weights(xv, cfg.graph_b);
    if (cfg.knn > 0) w = knn_truncate(w, cfg.knn);
    per_view.push_back(laplacian(w));
  }
  const GraphPenalty block = multiview_block_laplacian(per_view);

  IndexList lm;
  if (cfg.landmarks.size() > 1) throw InvalidArgument("multiview takes one --landmarks value");
  if (!cfg.landmarks.empty() && cfg.landmarks.front() < data.n()) {
    lm = select_landmarks(data.n(), cfg.landmarks.front(), mode_of(cfg), cfg.seed);
  }
  MultiViewConfig mv;
  mv.lambda_a = cfg.lambda_a;
  mv.lambda_b = cfg.lambda_b;
  mv.lambda_w = cfg.lambda_w;
  const CombinationWeights w0 = CombinationWeights::uniform(v, cfg.alpha);
  MultiViewModel model = fit_multiview(data, mvk, lm, w0, mv, block);
  if (cfg.optimize) {
    CombinationSearch search;
    search.seed = cfg.seed;
    const PointSet labeled_x = data.x.topRows(static_cast<Eigen::Index>(data.m()));
    model.weights = optimize_combination(model, labeled_x, data.y, cfg.alpha, search);
  }
  const PointSet queries = cfg.test.empty() ? data.x : load_points(cfg.test, cfg.header);
  Sink sink(cfg.out, out);
  if (cfg.classes > 0) {
    for (std::size_t c : classify_multiview(model, queries)) sink.get() << c << '\n';
  } else {
    write_csv(sink.get(), model.predict(queries));
  }
  sink.finish();
  if (cfg.optimize) {
    out << "combination";
    for (Eigen::Index i = 0; i < model.weights.c.size(); ++i) out << ' ' << exact(model.weights.c(i));
    out << '\n';
  }
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Multi-penalty kernel regression with Nystrom subsampling", "nysreg"};
  app.set_config("--config", "", "key=value settings file; flags take precedence");
  app.require_subcommand(1, 1);

  app.add_option("--data", cfg.data, "input CSV");
  app.add_option("--test", cfg.test, "query points CSV");
  app.add_option("--model", cfg.model, "model file");
  app.add_option("--models", cfg.models, "member model files")->delimiter(',');
  app.add_option("--out", cfg.out, "output path (default: standard output)");
  app.add_option("--long-out", cfg.long_out, "long-format CV records");
  app.add_option("--truth-out", cfg.truth_out, "noise-free target values");
  app.add_flag("--header", cfg.header, "first CSV row is a header");
  app.add_option("--label-column", cfg.label_column, "label column, negative counts from the end");
  app.add_option("--labeled", cfg.labeled, "number of leading labeled rows");
  app.add_option("--max-rows", cfg.max_rows, "read at most this many rows");

  app.add_option("--kernel", cfg.kernel, "gaussian:G, chi2:G, linear or precomputed:PATH");
  app.add_option("--lambda0", cfg.lambda0, "ambient regularization");
  app.add_option("--lambda1", cfg.lambda1, "graph regularization (0 disables the graph)");
  app.add_option("--graph-b", cfg.graph_b, "edge weight bandwidth b in exp(-d^2/4b)");
  app.add_option("--knn", cfg.knn, "keep the k strongest edges per point (0 = all)");
  app.add_option("--scaling", cfg.scaling, "times_m or none");
  app.add_option("--landmarks", cfg.landmarks, "landmark count(s); several trigger aggregation")
      ->delimiter(',');
  app.add_option("--landmark-mode", cfg.landmark_mode, "uniform or first");
  app.add_option("--seed", cfg.seed, "random seed");

  app.add_option("--protocol", cfg.protocol, "paper or kfold");
  app.add_option("--folds", cfg.folds, "number of folds");
  app.add_option("--redraws", cfg.redraws, "landmark redraws per fold");
  app.add_flag("--no-full", cfg.no_full, "skip the full-solution estimators");
  app.add_flag("--nslkdd", cfg.nslkdd, "data is a raw NSL-KDD file");
  app.add_option("--lambda0-grid", cfg.lambda0_grid, "grid for lambda0")->delimiter(',');
  app.add_option("--lambda1-grid", cfg.lambda1_grid, "grid for lambda1")->delimiter(',');
  app.add_flag("--regression", cfg.regression, "score by squared error instead of misclassification");

  app.add_option("--gamma-grid", cfg.gamma_grid, "regularization levels")->delimiter(',');
  app.add_option("--eta", cfg.eta, "confidence level");

  app.add_option("--sizes", cfg.sizes, "sample sizes")->delimiter(',');
  app.add_option("--trials", cfg.trials, "trials per sample size");
  app.add_option("--r", cfg.r, "source condition exponent");
  app.add_option("--decay-b", cfg.decay_b, "eigenvalue decay exponent");
  app.add_flag("--measure-decay", cfg.measure_decay, "estimate b from the kernel spectrum");
  app.add_option("--test-points", cfg.test_points, "fresh points for the error estimate");

  app.add_option("--n", cfg.n, "number of points");
  app.add_option("--dim", cfg.dim, "input dimension");
  app.add_option("--anchors", cfg.anchors, "anchors of the planted target");
  app.add_option("--target-gamma", cfg.target_gamma, "Gaussian width of the planted target");
  app.add_option("--noise", cfg.noise, "label noise standard deviation");

  app.add_option("--views", cfg.views, "view column slices offset:width")->delimiter(',');
  app.add_option("--view-kernels", cfg.view_kernels, "kernel per view")->delimiter(',');
  app.add_option("--lambda-a", cfg.lambda_a, "multiview ambient regularization");
  app.add_option("--lambda-b", cfg.lambda_b, "between-view regularization");
  app.add_option("--lambda-w", cfg.lambda_w, "within-view graph regularization");
  app.add_option("--alpha", cfg.alpha, "radius of the combination sphere");
  app.add_option("--classes", cfg.classes, "labels are class ids 0..C-1");
  app.add_flag("--optimize-combination", cfg.optimize, "fit combination weights on labeled rows");

  using Command = int (*)(const RunConfig&, std::ostream&);
  const std::pair<const char*, std::pair<const char*, Command>> commands[] = {
      {"fit", {"fit a model", cmd_fit}},
      {"predict", {"evaluate a model at query points", cmd_predict}},
      {"evaluate", {"confusion matrix and metrics on labeled data", cmd_evaluate}},
      {"cross-validate", {"fold-wise comparison of estimators", cmd_cross_validate}},
      {"aggregate", {"combine fitted models", cmd_aggregate}},
      {"diagnose", {"effective dimension, leverage and Nystrom gap", cmd_diagnose}},
      {"rate-check", {"empirical learning-rate slope", cmd_rate_check}},
      {"synthetic", {"sample from a planted target", cmd_synthetic}},
      {"grid-search", {"cross-validated parameter grid", cmd_grid_search}},
      {"multiview", {"multi-view fit and prediction", cmd_multiview}},
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& [name, info] : commands) {
    CLI::App* sub = app.add_subcommand(name, info.first);
    sub->fallthrough();
    subs.emplace_back(sub, info.second);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    cfg.kernel_given = app.count("--kernel") > 0;
    cfg.target_gamma_given = app.count("--target-gamma") > 0;
    cfg.noise_given = app.count("--noise") > 0;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n'
        << app.get_formatter()->make_help(&app, "", CLI::AppFormatMode::Normal);
    return usage_error;
  }

  try {
    for (const auto& [sub, command] : subs) {
      if (sub->parsed()) return command(cfg, out);
    }
    err << app.help();
    return usage_error;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return numerical_error;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return data_error;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return usage_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return usage_error;
  }
}

}  // namespace nysreg::cli
