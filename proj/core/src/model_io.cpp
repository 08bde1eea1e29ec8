#include "nysreg/model_io.hpp"

#include "nysreg/errors.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace nysreg {

namespace {

constexpr const char* model_magic = "nysreg-model";
constexpr const char* aggregate_magic = "nysreg-aggregate";
constexpr int format_version = 1;

std::string scaling_name(LaplacianScaling s) {
  return s == LaplacianScaling::times_m ? "times_m" : "none";
}

LaplacianScaling parse_scaling(const std::string& text) {
  if (text == "times_m") return LaplacianScaling::times_m;
  if (text == "none") return LaplacianScaling::none;
  throw DataError("model file: unknown laplacian scaling '" + text + "'");
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string word(const char* what) {
    std::string w;
    if (!(in_ >> w)) throw DataError(std::string("model file: missing ") + what);
    return w;
  }

  void expect(const std::string& keyword) {
    const std::string w = word(keyword.c_str());
    if (w != keyword) throw DataError("model file: expected '" + keyword + "', found '" + w + "'");
  }

  double number(const char* what) {
    const std::string w = word(what);
    double value = 0.0;
    const auto res = std::from_chars(w.data(), w.data() + w.size(), value);
    if (res.ec != std::errc() || res.ptr != w.data() + w.size()) {
      throw DataError(std::string("model file: bad ") + what + " '" + w + "'");
    }
    return value;
  }

  std::size_t count(const char* what) {
    const std::string w = word(what);
    std::size_t value = 0;
    const auto res = std::from_chars(w.data(), w.data() + w.size(), value);
    if (res.ec != std::errc() || res.ptr != w.data() + w.size()) {
      throw DataError(std::string("model file: bad ") + what + " '" + w + "'");
    }
    return value;
  }

  std::istream& stream() { return in_; }

 private:
  std::istream& in_;
};

void write_header(std::ostream& out, const char* magic) {
  out << magic << ' ' << format_version << '\n';
}

void read_version(Reader& r) {
  const std::size_t version = r.count("format version");
  if (version != format_version) {
    throw DataError("model file: unsupported format version " + std::to_string(version));
  }
}

void write_body(std::ostream& out, const NystromModel& model) {
  out << "kernel " << to_string(model.kernel) << '\n';
  out << "lambda0 " << model.lambda0 << '\n';
  out << "penalties " << model.penalty_lambdas.size();
  for (double l : model.penalty_lambdas) out << ' ' << l;
  out << '\n';
  out << "scaling " << scaling_name(model.scaling) << '\n';
  out << "landmarks " << model.landmark_indices.size() << ' ' << model.landmark_points.cols() << ' '
      << model.coefficients.cols() << '\n';
  for (std::size_t j = 0; j < model.landmark_indices.size(); ++j) {
    const auto row = static_cast<Eigen::Index>(j);
    out << model.landmark_indices[j];
    for (Eigen::Index c = 0; c < model.landmark_points.cols(); ++c) {
      out << ' ' << model.landmark_points(row, c);
    }
    for (Eigen::Index c = 0; c < model.coefficients.cols(); ++c) {
      out << ' ' << model.coefficients(row, c);
    }
    out << '\n';
  }
  out << "end\n";
}

NystromModel read_body(Reader& r) {
  NystromModel model;
  r.expect("kernel");
  model.kernel = parse_kernel_spec(r.word("kernel spec"));
  r.expect("lambda0");
  model.lambda0 = r.number("lambda0");
  r.expect("penalties");
  const std::size_t k = r.count("penalty count");
  for (std::size_t j = 0; j < k; ++j) model.penalty_lambdas.push_back(r.number("penalty lambda"));
  r.expect("scaling");
  model.scaling = parse_scaling(r.word("scaling"));
  r.expect("landmarks");
  const std::size_t s = r.count("landmark count");
  const std::size_t d = r.count("dimension");
  const std::size_t p = r.count("output count");
  if (s == 0 || d == 0 || p == 0) throw DataError("model file: empty model");
  model.landmark_indices.resize(s);
  model.landmark_points.resize(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(d));
  model.coefficients.resize(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < s; ++j) {
    const auto row = static_cast<Eigen::Index>(j);
    model.landmark_indices[j] = r.count("landmark index");
    for (std::size_t c = 0; c < d; ++c) {
      model.landmark_points(row, static_cast<Eigen::Index>(c)) = r.number("landmark coordinate");
    }
    for (std::size_t c = 0; c < p; ++c) {
      model.coefficients(row, static_cast<Eigen::Index>(c)) = r.number("coefficient");
    }
  }
  r.expect("end");
  return model;
}

struct PrecisionGuard {
  std::ostream& out;
  std::streamsize old;
  explicit PrecisionGuard(std::ostream& o) : out(o), old(o.precision(17)) {}
  ~PrecisionGuard() { out.precision(old); }
};

}  // namespace

void write_model(std::ostream& out, const NystromModel& model) {
  PrecisionGuard guard(out);
  write_header(out, model_magic);
  write_body(out, model);
}

NystromModel read_model(std::istream& in) {
  Reader r(in);
  r.expect(model_magic);
  read_version(r);
  return read_body(r);
}

void write_aggregate(std::ostream& out, const AggregatedModel& model) {
  if (static_cast<std::size_t>(model.cbar.size()) != model.members.size()) {
    throw InvalidArgument("aggregate weights do not match member count");
  }
  PrecisionGuard guard(out);
  write_header(out, aggregate_magic);
  out << "members " << model.members.size() << '\n';
  out << "cbar";
  for (Eigen::Index i = 0; i < model.cbar.size(); ++i) out << ' ' << model.cbar(i);
  out << '\n';
  for (const auto& member : model.members) write_body(out, member);
}

AggregatedModel read_aggregate(std::istream& in) {
  Reader r(in);
  r.expect(aggregate_magic);
  read_version(r);
  AggregatedModel model;
  r.expect("members");
  const std::size_t l = r.count("member count");
  if (l == 0) throw DataError("model file: aggregate without members");
  r.expect("cbar");
  model.cbar.resize(static_cast<Eigen::Index>(l));
  for (std::size_t i = 0; i < l; ++i) model.cbar(static_cast<Eigen::Index>(i)) = r.number("weight");
  for (std::size_t i = 0; i < l; ++i) model.members.push_back(read_body(r));
  return model;
}

Matrix AnyModel::predict(const PointSet& queries) const {
  if (const auto* single = std::get_if<NystromModel>(&model)) return nysreg::predict(*single, queries);
  return predict_aggregate(std::get<AggregatedModel>(model), queries);
}

std::size_t AnyModel::dim() const {
  if (const auto* single = std::get_if<NystromModel>(&model)) {
    return static_cast<std::size_t>(single->landmark_points.cols());
  }
  return static_cast<std::size_t>(
      std::get<AggregatedModel>(model).members.front().landmark_points.cols());
}

AnyModel read_any_model(std::istream& in) {
  const auto start = in.tellg();
  std::string magic;
  if (!(in >> magic)) throw DataError("model file is empty");
  in.seekg(start);
  if (!in) throw DataError("model stream is not seekable");
  if (magic == model_magic) return AnyModel{read_model(in)};
  if (magic == aggregate_magic) return AnyModel{read_aggregate(in)};
  throw DataError("not a model file (found '" + magic + "')");
}

void save_model(const std::string& path, const NystromModel& model) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  write_model(out, model);
  if (!out) throw DataError("failed writing " + path);
}

void save_model(const std::string& path, const AggregatedModel& model) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  write_aggregate(out, model);
  if (!out) throw DataError("failed writing " + path);
}

AnyModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return read_any_model(in);
}

}  // namespace nysreg
