#ifndef NYSREG_LINALG_HPP
#define NYSREG_LINALG_HPP

#include "nysreg/types.hpp"

namespace nysreg::linalg {

/// Returns (A + A^T)/2, or throws NumericalError when the relative
/// asymmetry max|A - A^T| / max|A| exceeds `tolerance`.
Matrix symmetrized(const Matrix& a, double tolerance, const char* what);

struct PinvSolve {
  Matrix solution;
  Eigen::Index rank = 0;
  double largest_eigenvalue = 0.0;
};

/// A^+ B for symmetric A via eigendecomposition; eigenvalues with
/// |sigma| <= relative_cutoff * max|sigma| are discarded.
PinvSolve symmetric_pinv_solve(const Matrix& a, const Matrix& b, double relative_cutoff);

/// A^-1 B for a general square A by partial-pivot LU. Throws NumericalError
/// carrying the condition estimate when rcond(A) < min_rcond.
Matrix general_solve(const Matrix& a, const Matrix& b, double min_rcond = 1e-14);

/// Eigenvalues of a symmetric matrix, ascending.
Vector symmetric_eigenvalues(const Matrix& a);

}  // namespace nysreg::linalg

#endif  // NYSREG_LINALG_HPP
