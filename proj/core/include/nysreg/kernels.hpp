#ifndef NYSREG_KERNELS_HPP
#define NYSREG_KERNELS_HPP

#include "nysreg/dataset.hpp"
#include "nysreg/types.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nysreg {

enum class KernelKind { gaussian, chi_squared, linear, precomputed };

/// Scalar kernel definition.
///
/// gaussian:     K(x,t) = exp(-gamma * |x - t|^2)
/// chi_squared:  K(x,t) = exp(-gamma * sum_i (x_i - t_i)^2 / (x_i + t_i + 1e-10))
/// linear:       K(x,t) = <x, t>
/// precomputed:  K(x,t) = table(x[0], t[0]); points are row/column indices
///               into the loaded kernel table.
class KernelSpec {
 public:
  static constexpr double chi_squared_epsilon = 1e-10;

  KernelSpec() = default;

  static KernelSpec gaussian(double gamma);
  static KernelSpec chi_squared(double gamma);
  static KernelSpec linear();
  static KernelSpec precomputed(std::shared_ptr<const Matrix> table, std::string source = {});

  KernelKind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  const Matrix* table() const { return table_.get(); }
  const std::string& source() const { return source_; }

  /// Largest diagonal value K(x,x) for x in `points` (kappa^2 estimate).
  double max_diagonal(const PointSet& points) const;

 private:
  KernelKind kind_ = KernelKind::linear;
  double gamma_ = 0.0;
  std::shared_ptr<const Matrix> table_;
  std::string source_;
};

double eval_kernel(const KernelSpec& spec, std::span<const double> x, std::span<const double> t);

/// "gaussian:0.04", "chi2:1", "linear" or "precomputed:<csv path>".
KernelSpec parse_kernel_spec(std::string_view text);
std::string to_string(const KernelSpec& spec);

/// Cross-kernel block K(a_i, b_j).
Matrix gram(const KernelSpec& spec, const PointSet& a, const PointSet& b);
/// Symmetric block K(a_i, a_j); only the upper triangle is evaluated.
Matrix gram(const KernelSpec& spec, const PointSet& a);
Matrix gram(const KernelSpec& spec, const Dataset& data, const IndexList& rows,
            const IndexList& cols);

/// Header-free CSV of a precomputed kernel block; rows == cols requires symmetry.
Matrix load_kernel_csv(const std::string& path);

/// Operator-valued kernel G(x,t) = sum_i K^i(x^i, t^i) e_i e_i^T over v views.
struct MultiViewKernel {
  std::vector<KernelSpec> views;
  std::vector<ViewSlice> slices;

  std::size_t view_count() const { return views.size(); }
  /// Throws unless there is one slice per view, slices are disjoint, and they
  /// cover exactly `dim` input columns.
  void validate(std::size_t dim) const;
};

/// K^i(a_p^i, b_q^i) for every view i.
std::vector<Matrix> per_view_grams(const MultiViewKernel& mvk, const PointSet& a,
                                   const PointSet& b);

/// Dense (|a| v) x (|b| v) layout: block (p,q) is the v x v diagonal matrix
/// diag(K^1(a_p^1, b_q^1), ..., K^v(a_p^v, b_q^v)). Point-major index p*v + i.
Matrix multiview_gram(const MultiViewKernel& mvk, const PointSet& a, const PointSet& b);
Matrix multiview_gram(const MultiViewKernel& mvk, const Dataset& data, const IndexList& rows,
                      const IndexList& cols);

/// Reassembles the point-major layout from per-view blocks.
Matrix interleave_views(const std::vector<Matrix>& blocks);

}  // namespace nysreg

#endif  // NYSREG_KERNELS_HPP
