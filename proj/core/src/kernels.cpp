#include "nysreg/kernels.hpp"

#include "nysreg/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nysreg {
namespace {

std::span<const double> row_span(const PointSet& x, Eigen::Index i) {
  return {x.data() + i * x.cols(), static_cast<std::size_t>(x.cols())};
}

void require_positive_gamma(double gamma, const char* kind) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgument(std::string(kind) + " kernel needs a positive finite gamma");
  }
}

std::size_t table_index(double coordinate, Eigen::Index extent) {
  if (!(coordinate >= 0.0) || coordinate != std::floor(coordinate) ||
      coordinate >= static_cast<double>(extent)) {
    throw InvalidArgument("precomputed kernel index out of range");
  }
  return static_cast<std::size_t>(coordinate);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  while (first != last && *first == ' ') ++first;
  while (last != first && (last[-1] == ' ' || last[-1] == '\r')) --last;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw InvalidArgument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

KernelSpec KernelSpec::gaussian(double gamma) {
  require_positive_gamma(gamma, "gaussian");
  KernelSpec spec;
  spec.kind_ = KernelKind::gaussian;
  spec.gamma_ = gamma;
  return spec;
}

KernelSpec KernelSpec::chi_squared(double gamma) {
  require_positive_gamma(gamma, "chi-squared");
  KernelSpec spec;
  spec.kind_ = KernelKind::chi_squared;
  spec.gamma_ = gamma;
  return spec;
}

KernelSpec KernelSpec::linear() { return KernelSpec{}; }

KernelSpec KernelSpec::precomputed(std::shared_ptr<const Matrix> table, std::string source) {
  if (!table || table->size() == 0) {
    throw InvalidArgument("precomputed kernel table is empty");
  }
  if (!table->allFinite()) {
    throw InvalidArgument("precomputed kernel table has non-finite entries");
  }
  if (table->rows() == table->cols()) {
    const double scale = std::max(1.0, table->cwiseAbs().maxCoeff());
    if ((*table - table->transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw InvalidArgument("square precomputed kernel table must be symmetric");
    }
  }
  KernelSpec spec;
  spec.kind_ = KernelKind::precomputed;
  spec.table_ = std::move(table);
  spec.source_ = std::move(source);
  return spec;
}

double KernelSpec::max_diagonal(const PointSet& points) const {
  double best = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const auto p = row_span(points, i);
    best = std::max(best, eval_kernel(*this, p, p));
  }
  return best;
}

double eval_kernel(const KernelSpec& spec, std::span<const double> x, std::span<const double> t) {
  if (x.size() != t.size()) {
    throw InvalidArgument("kernel arguments differ in dimension");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(t[i])) {
      throw InvalidArgument("kernel argument is not finite");
    }
  }
  switch (spec.kind()) {
    case KernelKind::gaussian: {
      double dist = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x[i] - t[i];
        dist += diff * diff;
      }
      return std::exp(-spec.gamma() * dist);
    }
    case KernelKind::chi_squared: {
      double dist = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x[i] - t[i];
        dist += diff * diff / (x[i] + t[i] + KernelSpec::chi_squared_epsilon);
      }
      return std::exp(-spec.gamma() * dist);
    }
    case KernelKind::linear: {
      double dot = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * t[i];
      return dot;
    }
    case KernelKind::precomputed: {
      if (x.empty()) throw InvalidArgument("precomputed kernel needs an index coordinate");
      const Matrix& table = *spec.table();
      return table(static_cast<Eigen::Index>(table_index(x[0], table.rows())),
                   static_cast<Eigen::Index>(table_index(t[0], table.cols())));
    }
  }
  return 0.0;
}

KernelSpec parse_kernel_spec(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (name == "linear") return KernelSpec::linear();
  if (name == "gaussian" || name == "rbf") return KernelSpec::gaussian(parse_double(arg));
  if (name == "chi2" || name == "chi_squared") return KernelSpec::chi_squared(parse_double(arg));
  if (name == "precomputed") {
    if (arg.empty()) throw InvalidArgument("precomputed kernel needs a file path");
    const std::string path(arg);
    return KernelSpec::precomputed(std::make_shared<const Matrix>(load_kernel_csv(path)), path);
  }
  throw InvalidArgument("unknown kernel '" + std::string(text) + "'");
}

std::string to_string(const KernelSpec& spec) {
  std::ostringstream out;
  out.precision(17);
  switch (spec.kind()) {
    case KernelKind::gaussian: out << "gaussian:" << spec.gamma(); break;
    case KernelKind::chi_squared: out << "chi2:" << spec.gamma(); break;
    case KernelKind::linear: out << "linear"; break;
    case KernelKind::precomputed: out << "precomputed:" << spec.source(); break;
  }
  return out.str();
}

Matrix gram(const KernelSpec& spec, const PointSet& a, const PointSet& b) {
  Matrix k(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    const auto bj = row_span(b, j);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      k(i, j) = eval_kernel(spec, row_span(a, i), bj);
    }
  }
  return k;
}

Matrix gram(const KernelSpec& spec, const PointSet& a) {
  Matrix k(a.rows(), a.rows());
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    const auto aj = row_span(a, j);
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double value = eval_kernel(spec, row_span(a, i), aj);
      k(i, j) = value;
      k(j, i) = value;
    }
  }
  return k;
}

Matrix gram(const KernelSpec& spec, const Dataset& data, const IndexList& rows,
            const IndexList& cols) {
  for (const auto* list : {&rows, &cols}) {
    for (std::size_t idx : *list) {
      if (idx >= data.n()) throw InvalidArgument("gram index out of range");
    }
  }
  if (rows == cols) return gram(spec, select_rows(data.x, rows));
  return gram(spec, select_rows(data.x, rows), select_rows(data.x, cols));
}

Matrix load_kernel_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open kernel file " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::size_t start = 0;
    std::size_t col = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const auto field = std::string_view(line).substr(start, comma - start);
      ++col;
      try {
        row.push_back(parse_double(field));
      } catch (const InvalidArgument&) {
        throw DataError(path + ":" + std::to_string(line_no) + ":" + std::to_string(col) +
                        ": not a number");
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError(path + ":" + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("kernel file " + path + " is empty");
  Matrix table(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) table(i, j) = rows[i][j];
  }
  return table;
}

void MultiViewKernel::validate(std::size_t dim) const {
  if (views.empty()) throw InvalidArgument("multi-view kernel needs at least one view");
  if (slices.size() != views.size()) {
    throw InvalidArgument("multi-view kernel needs one column slice per view");
  }
  std::vector<int> covered(dim, 0);
  for (const auto& slice : slices) {
    if (slice.width == 0 || slice.offset + slice.width > dim) {
      throw InvalidArgument("view slice outside the input dimension");
    }
    for (std::size_t c = slice.offset; c < slice.offset + slice.width; ++c) ++covered[c];
  }
  for (int count : covered) {
    if (count != 1) throw InvalidArgument("view slices must be disjoint and cover every column");
  }
}

std::vector<Matrix> per_view_grams(const MultiViewKernel& mvk, const PointSet& a,
                                   const PointSet& b) {
  if (a.cols() != b.cols()) throw InvalidArgument("point sets differ in dimension");
  mvk.validate(static_cast<std::size_t>(a.cols()));
  std::vector<Matrix> blocks;
  blocks.reserve(mvk.view_count());
  for (std::size_t v = 0; v < mvk.view_count(); ++v) {
    const auto& slice = mvk.slices[v];
    const auto off = static_cast<Eigen::Index>(slice.offset);
    const auto width = static_cast<Eigen::Index>(slice.width);
    const PointSet av = a.middleCols(off, width);
    const PointSet bv = b.middleCols(off, width);
    blocks.push_back(gram(mvk.views[v], av, bv));
  }
  return blocks;
}

Matrix interleave_views(const std::vector<Matrix>& blocks) {
  if (blocks.empty()) throw InvalidArgument("no view blocks to interleave");
  const auto v = static_cast<Eigen::Index>(blocks.size());
  const Eigen::Index rows = blocks.front().rows();
  const Eigen::Index cols = blocks.front().cols();
  if (v == 1) return blocks.front();
  Matrix out = Matrix::Zero(rows * v, cols * v);
  for (Eigen::Index i = 0; i < v; ++i) {
    const Matrix& block = blocks[static_cast<std::size_t>(i)];
    if (block.rows() != rows || block.cols() != cols) {
      throw InvalidArgument("view blocks differ in shape");
    }
    for (Eigen::Index q = 0; q < cols; ++q) {
      for (Eigen::Index p = 0; p < rows; ++p) out(p * v + i, q * v + i) = block(p, q);
    }
  }
  return out;
}

Matrix multiview_gram(const MultiViewKernel& mvk, const PointSet& a, const PointSet& b) {
  return interleave_views(per_view_grams(mvk, a, b));
}

Matrix multiview_gram(const MultiViewKernel& mvk, const Dataset& data, const IndexList& rows,
                      const IndexList& cols) {
  for (const auto* list : {&rows, &cols}) {
    for (std::size_t idx : *list) {
      if (idx >= data.n()) throw InvalidArgument("multi-view gram index out of range");
    }
  }
  return multiview_gram(mvk, select_rows(data.x, rows), select_rows(data.x, cols));
}

}  // namespace nysreg
