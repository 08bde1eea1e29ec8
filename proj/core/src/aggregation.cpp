#include "nysreg/aggregation.hpp"

#include "nysreg/errors.hpp"
#include "nysreg/linalg.hpp"

namespace nysreg {
namespace {

constexpr double kLfsCutoff = 1e-10;

}  // namespace

double LfsSolution::proxy(const Vector& c) const {
  return c.dot(hbar_matrix * c) - 2.0 * c.dot(hbar);
}

LfsSolution solve_lfs(std::span<const Matrix> member_values, const Matrix& y) {
  if (member_values.empty()) throw InvalidArgument("aggregation needs at least one member");
  const Eigen::Index n = member_values.front().rows();
  const Eigen::Index p = member_values.front().cols();
  const Eigen::Index m = y.rows();
  if (m == 0 || m > n) throw InvalidArgument("aggregation: bad labeled count");
  if (y.cols() != p) throw InvalidArgument("aggregation: label width differs from member outputs");
  for (const auto& f : member_values) {
    if (f.rows() != n || f.cols() != p) throw InvalidArgument("aggregation: members disagree in shape");
  }

  const auto l = static_cast<Eigen::Index>(member_values.size());
  LfsSolution out;
  out.hbar_matrix.resize(l, l);
  out.hbar.resize(l);
  for (Eigen::Index i = 0; i < l; ++i) {
    const Matrix& fi = member_values[static_cast<std::size_t>(i)];
    out.hbar(i) = (y.array() * fi.topRows(m).array()).sum() / static_cast<double>(m);
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double dot = (fi.array() * member_values[static_cast<std::size_t>(j)].array()).sum() /
                         static_cast<double>(n);
      out.hbar_matrix(i, j) = dot;
      out.hbar_matrix(j, i) = dot;
    }
  }
  auto solved = linalg::symmetric_pinv_solve(out.hbar_matrix, out.hbar, kLfsCutoff);
  out.cbar = solved.solution.col(0);
  out.rank = solved.rank;
  return out;
}

AggregatedModel aggregate_lfs(std::vector<NystromModel> members, const Dataset& data) {
  if (members.empty()) throw InvalidArgument("aggregation needs at least one member");
  std::vector<Matrix> values;
  values.reserve(members.size());
  for (const auto& member : members) values.push_back(predict(member, data.x));
  const LfsSolution lfs = solve_lfs(values, data.y);
  AggregatedModel out;
  out.members = std::move(members);
  out.cbar = lfs.cbar;
  out.hbar_matrix = lfs.hbar_matrix;
  out.hbar = lfs.hbar;
  return out;
}

Matrix combine_predictions(std::span<const Matrix> member_values, const Vector& cbar) {
  if (member_values.empty()) throw InvalidArgument("no member predictions");
  if (static_cast<Eigen::Index>(member_values.size()) != cbar.size()) {
    throw InvalidArgument("weight count differs from member count");
  }
  Matrix out = Matrix::Zero(member_values.front().rows(), member_values.front().cols());
  for (std::size_t i = 0; i < member_values.size(); ++i) {
    out += cbar(static_cast<Eigen::Index>(i)) * member_values[i];
  }
  return out;
}

Matrix predict_aggregate(const AggregatedModel& model, const PointSet& queries) {
  std::vector<Matrix> values;
  values.reserve(model.members.size());
  for (const auto& member : model.members) values.push_back(predict(member, queries));
  return combine_predictions(values, model.cbar);
}

}  // namespace nysreg
