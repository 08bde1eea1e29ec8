#include "nysreg/linalg.hpp"

#include "nysreg/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace nysreg::linalg {

Matrix symmetrized(const Matrix& a, double tolerance, const char* what) {
  if (a.rows() != a.cols()) throw InvalidArgument(std::string(what) + " is not square");
  if (a.size() == 0) return a;
  const double scale = a.cwiseAbs().maxCoeff();
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && asym > tolerance * scale) {
    std::ostringstream msg;
    msg << what << " is asymmetric (relative " << asym / scale << ")";
    throw NumericalError(msg.str());
  }
  return 0.5 * (a + a.transpose());
}

PinvSolve symmetric_pinv_solve(const Matrix& a, const Matrix& b, double relative_cutoff) {
  if (a.rows() != b.rows()) throw InvalidArgument("pseudoinverse solve: size mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Vector& values = eig.eigenvalues();
  const double largest = values.cwiseAbs().maxCoeff();
  PinvSolve out;
  out.largest_eigenvalue = largest;
  Vector inv = Vector::Zero(values.size());
  if (largest > 0.0) {
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      if (std::abs(values(i)) > relative_cutoff * largest) {
        inv(i) = 1.0 / values(i);
        ++out.rank;
      }
    }
  }
  const Matrix& u = eig.eigenvectors();
  out.solution = u * (inv.asDiagonal() * (u.transpose() * b));
  return out;
}

Matrix general_solve(const Matrix& a, const Matrix& b, double min_rcond) {
  if (a.rows() != a.cols() || a.rows() != b.rows()) {
    throw InvalidArgument("linear solve: size mismatch");
  }
  Eigen::PartialPivLU<Matrix> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond >= min_rcond)) {
    const double cond = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    std::ostringstream msg;
    msg << "system matrix is singular to working precision (condition estimate " << cond << ")";
    throw NumericalError(msg.str(), cond);
  }
  return lu.solve(b);
}

Vector symmetric_eigenvalues(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  return eig.eigenvalues();
}

}  // namespace nysreg::linalg
