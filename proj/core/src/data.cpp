#include "nysreg/data.hpp"

#include "nysreg/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>

namespace nysreg {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_number(std::string_view text, double& value) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(value);
}

std::string location(const std::string& path, std::size_t row, std::size_t col) {
  return path + ": row " + std::to_string(row) + ", column " + std::to_string(col);
}

PointSet to_points(const RawTable& table, const std::string& path, std::size_t first_line,
                   int skip_column) {
  const std::size_t width = table.front().size() - (skip_column >= 0 ? 1 : 0);
  PointSet x(static_cast<Eigen::Index>(table.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < table.size(); ++r) {
    Eigen::Index c_out = 0;
    for (std::size_t c = 0; c < table[r].size(); ++c) {
      if (static_cast<int>(c) == skip_column) continue;
      double value = 0.0;
      if (!parse_number(table[r][c], value)) {
        throw DataError(location(path, r + first_line, c + 1) + ": not a finite number '" +
                        table[r][c] + "'");
      }
      x(static_cast<Eigen::Index>(r), c_out++) = value;
    }
  }
  return x;
}

}  // namespace

IndexList iota_indices(std::size_t n) {
  IndexList out(n);
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

void Dataset::validate() const {
  if (m() > n()) throw InvalidArgument("dataset has more labels than points");
  if (!x.allFinite()) throw InvalidArgument("dataset inputs are not finite");
  if (!y.allFinite()) throw InvalidArgument("dataset labels are not finite");
  if (!view_slices.empty()) {
    std::vector<int> covered(dim(), 0);
    for (const auto& slice : view_slices) {
      if (slice.offset + slice.width > dim()) throw InvalidArgument("view slice out of range");
      for (std::size_t c = slice.offset; c < slice.offset + slice.width; ++c) ++covered[c];
    }
    if (std::any_of(covered.begin(), covered.end(), [](int c) { return c != 1; })) {
      throw InvalidArgument("view slices must be disjoint and covering");
    }
  }
}

PointSet select_rows(const PointSet& x, const IndexList& rows) {
  PointSet out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= static_cast<std::size_t>(x.rows())) throw InvalidArgument("row index out of range");
    out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

Matrix select_rows(const Matrix& y, const IndexList& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), y.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= static_cast<std::size_t>(y.rows())) throw InvalidArgument("row index out of range");
    out.row(static_cast<Eigen::Index>(i)) = y.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

Dataset make_subset(const PointSet& x, const Matrix& labels, const IndexList& labeled,
                    const IndexList& unlabeled) {
  IndexList all = labeled;
  all.insert(all.end(), unlabeled.begin(), unlabeled.end());
  Dataset out;
  out.x = select_rows(x, all);
  out.y = select_rows(labels, labeled);
  return out;
}

RawTable read_csv_table(const std::string& path, bool has_header,
                        std::optional<std::size_t> max_rows) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  RawTable table;
  std::string line;
  bool header_pending = has_header;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    if (max_rows && table.size() >= *max_rows) break;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.emplace_back(trim(std::string_view(line).substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!table.empty() && fields.size() != table.front().size()) {
      throw DataError(path + ": line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(table.front().size()));
    }
    table.push_back(std::move(fields));
  }
  if (table.empty()) throw DataError(path + " contains no data rows");
  return table;
}

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  if (options.labeled_count && *options.labeled_count == 0) throw DataError("no labeled data");
  const RawTable table = read_csv_table(path, options.has_header, options.max_rows);
  const auto width = static_cast<int>(table.front().size());
  const int label_col = options.label_column < 0 ? width + options.label_column : options.label_column;
  if (label_col < 0 || label_col >= width) throw DataError(path + ": label column out of range");
  if (width < 2) throw DataError(path + ": need at least one feature column besides the label");

  const std::size_t first_line = options.has_header ? 2 : 1;
  Dataset data;
  data.x = to_points(table, path, first_line, label_col);
  const std::size_t n = table.size();
  const std::size_t m = options.labeled_count.value_or(n);
  if (m > n) throw DataError(path + ": labeled count exceeds the number of rows");
  data.y.resize(static_cast<Eigen::Index>(m), 1);
  for (std::size_t r = 0; r < m; ++r) {
    double value = 0.0;
    if (!parse_number(table[r][static_cast<std::size_t>(label_col)], value)) {
      throw DataError(location(path, r + first_line, static_cast<std::size_t>(label_col) + 1) +
                      ": label is not a finite number");
    }
    data.y(static_cast<Eigen::Index>(r), 0) = value;
  }
  return data;
}

PointSet load_points(const std::string& path, bool has_header) {
  const RawTable table = read_csv_table(path, has_header);
  return to_points(table, path, has_header ? 2 : 1, -1);
}

void write_csv(std::ostream& out, const Matrix& values, int precision) {
  const auto old = out.precision(precision);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j) out << ',';
      out << values(i, j);
    }
    out << '\n';
  }
  out.precision(old);
}

void write_csv(std::ostream& out, const PointSet& values, int precision) {
  write_csv(out, Matrix(values), precision);
}

void write_dataset_csv(std::ostream& out, const Dataset& data, int precision) {
  Matrix table = Matrix::Zero(data.x.rows(), data.x.cols() + data.y.cols());
  table.leftCols(data.x.cols()) = data.x;
  table.block(0, data.x.cols(), data.y.rows(), data.y.cols()) = data.y;
  write_csv(out, table, precision);
}

MinMaxScaler MinMaxScaler::fit(const PointSet& x) {
  if (x.rows() == 0) throw InvalidArgument("cannot fit scaling on zero rows");
  MinMaxScaler s;
  s.min = x.colwise().minCoeff();
  s.max = x.colwise().maxCoeff();
  return s;
}

PointSet MinMaxScaler::transform(const PointSet& x) const {
  if (x.cols() != min.size()) throw InvalidArgument("scaler dimension mismatch");
  PointSet out(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double range = max(j) - min(j);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      out(i, j) = range > 0.0 ? (x(i, j) - min(j)) / range : 0.0;
    }
  }
  return out;
}

void NslKddEncoding::write(std::ostream& out) const {
  static const char* protocols[] = {"tcp", "udp", "icmp"};
  for (std::size_t i = 0; i < 3; ++i) out << "protocol_type:" << protocols[i] << ',' << i << '\n';
  for (std::size_t i = 0; i < services.size(); ++i) out << "service:" << services[i] << ',' << i << '\n';
  for (std::size_t i = 0; i < flags.size(); ++i) out << "flag:" << flags[i] << ',' << i << '\n';
  for (std::size_t c : kept_columns) out << "kept_attribute:" << c << ',' << c << '\n';
}

NslKddData preprocess_nslkdd(const RawTable& rows) {
  constexpr std::size_t kAttributes = 41;
  constexpr std::size_t kProtocol = 1;
  constexpr std::size_t kService = 2;
  constexpr std::size_t kFlag = 3;
  if (rows.empty()) throw DataError("NSL-KDD input is empty");

  std::set<std::string> services;
  std::set<std::string> flags;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != kAttributes + 1 && rows[r].size() != kAttributes + 2) {
      throw DataError("NSL-KDD row " + std::to_string(r + 1) + " has " +
                      std::to_string(rows[r].size()) + " fields, expected 42 or 43");
    }
    services.insert(rows[r][kService]);
    flags.insert(rows[r][kFlag]);
  }

  NslKddData out;
  out.encoding.services.assign(services.begin(), services.end());
  out.encoding.flags.assign(flags.begin(), flags.end());
  std::map<std::string, double> service_code;
  std::map<std::string, double> flag_code;
  for (std::size_t i = 0; i < out.encoding.services.size(); ++i) service_code[out.encoding.services[i]] = static_cast<double>(i);
  for (std::size_t i = 0; i < out.encoding.flags.size(); ++i) flag_code[out.encoding.flags[i]] = static_cast<double>(i);

  const auto n = static_cast<Eigen::Index>(rows.size());
  PointSet full(n, static_cast<Eigen::Index>(kAttributes));
  out.labels.resize(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    for (std::size_t c = 0; c < kAttributes; ++c) {
      double value = 0.0;
      if (c == kProtocol) {
        if (row[c] == "tcp") value = 0.0;
        else if (row[c] == "udp") value = 1.0;
        else if (row[c] == "icmp") value = 2.0;
        else throw DataError("NSL-KDD row " + std::to_string(r + 1) + ": unknown protocol '" + row[c] + "'");
      } else if (c == kService) {
        value = service_code.at(row[c]);
      } else if (c == kFlag) {
        value = flag_code.at(row[c]);
      } else if (!parse_number(row[c], value)) {
        throw DataError("NSL-KDD row " + std::to_string(r + 1) + ", column " + std::to_string(c + 1) +
                        ": not a number '" + row[c] + "'");
      }
      full(r, static_cast<Eigen::Index>(c)) = value;
    }
    out.labels(r) = row[kAttributes] == "normal" ? -1.0 : 1.0;
  }

  for (std::size_t c = 0; c < kAttributes; ++c) {
    if (!full.col(static_cast<Eigen::Index>(c)).isZero(0.0)) out.encoding.kept_columns.push_back(c);
  }
  out.encoded.resize(n, static_cast<Eigen::Index>(out.encoding.kept_columns.size()));
  for (std::size_t j = 0; j < out.encoding.kept_columns.size(); ++j) {
    out.encoded.col(static_cast<Eigen::Index>(j)) = full.col(static_cast<Eigen::Index>(out.encoding.kept_columns[j]));
  }
  out.scaler = MinMaxScaler::fit(out.encoded);
  out.dataset.x = out.scaler.transform(out.encoded);
  out.dataset.y = out.labels;
  return out;
}

std::vector<Fold> kfold_split(std::size_t n, std::size_t k, FoldScheme scheme, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("need at least 2 folds");
  if (k > n) throw InvalidArgument("more folds than points");
  IndexList order = iota_indices(n);
  if (scheme == FoldScheme::shuffled) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      std::swap(order[i - 1], order[pick(rng)]);
    }
  }
  const std::size_t block = n / k;
  std::vector<Fold> folds(k);
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t begin = f * block;
    const std::size_t end = f + 1 == k ? n : begin + block;
    for (std::size_t i = 0; i < n; ++i) {
      (i >= begin && i < end ? folds[f].test : folds[f].train).push_back(order[i]);
    }
  }
  return folds;
}

std::vector<Fold> paper_protocol_splits(std::size_t n, std::size_t k) {
  const auto blocks = kfold_split(n, k, FoldScheme::paper_sequential);
  std::vector<Fold> out;
  for (std::size_t f = 0; f + 1 < k; ++f) out.push_back({blocks[f].test, blocks[k - 1].test});
  return out;
}

Vector SyntheticTarget::evaluate(const PointSet& x) const {
  return gram(kernel, x, anchors) * amplitudes;
}

PointSet uniform_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PointSet x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = unit(rng);
  }
  return x;
}

SyntheticSample gen_synthetic(const SyntheticTarget& target, std::size_t m, std::size_t n,
                              std::uint64_t seed) {
  if (m > n) throw InvalidArgument("labeled count exceeds sample size");
  if (target.anchors.rows() == 0 || target.anchors.rows() != target.amplitudes.size()) {
    throw InvalidArgument("synthetic target needs one amplitude per anchor");
  }
  if (!(target.noise_sigma >= 0.0)) throw InvalidArgument("noise sigma must be nonnegative");
  SyntheticSample out;
  out.data.x = uniform_points(n, static_cast<std::size_t>(target.anchors.cols()), seed);
  out.truth = target.evaluate(out.data.x);
  std::mt19937_64 noise_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> noise(0.0, 1.0);
  out.data.y.resize(static_cast<Eigen::Index>(m), 1);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(m); ++i) {
    const double eps = target.noise_sigma > 0.0 ? target.noise_sigma * noise(noise_rng) : 0.0;
    out.data.y(i, 0) = out.truth(i) + eps;
  }
  return out;
}

}  // namespace nysreg
