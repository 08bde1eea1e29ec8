#include "doctest.h"
#include "oracles.hpp"

#include "nysreg/errors.hpp"
#include "nysreg/linalg.hpp"

using namespace nysreg;

TEST_CASE("symmetrized averages and rejects drift") {
  Matrix a(2, 2);
  a << 1, 2, 2 + 1e-12, 3;
  const Matrix s = linalg::symmetrized(a, 1e-8, "test");
  CHECK(s == s.transpose());
  a(1, 0) = 2.5;
  CHECK_THROWS_AS(linalg::symmetrized(a, 1e-8, "test"), NumericalError);
}

TEST_CASE("symmetric_pinv_solve on a rank-deficient matrix") {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 2.0;
  a(1, 1) = 4.0;
  Matrix b(3, 1);
  b << 2, 8, 5;
  const auto res = linalg::symmetric_pinv_solve(a, b, 1e-12);
  CHECK(res.rank == 2);
  CHECK(res.largest_eigenvalue == doctest::Approx(4.0));
  CHECK(res.solution(0, 0) == doctest::Approx(1.0));
  CHECK(res.solution(1, 0) == doctest::Approx(2.0));
  CHECK(res.solution(2, 0) == 0.0);
}

TEST_CASE("symmetric_pinv_solve matches the inverse on SPD input") {
  std::mt19937_64 rng(1);
  const Matrix r = oracle::random_matrix(rng, 5, 5);
  const Matrix a = r * r.transpose() + Matrix::Identity(5, 5);
  const Matrix b = oracle::random_matrix(rng, 5, 2);
  const auto res = linalg::symmetric_pinv_solve(a, b, 1e-12);
  CHECK((a * res.solution - b).norm() <= 1e-10 * b.norm());
}

TEST_CASE("general_solve and its condition check") {
  std::mt19937_64 rng(2);
  const Matrix a = oracle::random_matrix(rng, 4, 4) + 4.0 * Matrix::Identity(4, 4);
  const Matrix b = oracle::random_matrix(rng, 4, 3);
  CHECK((a * linalg::general_solve(a, b) - b).norm() <= 1e-12 * b.norm());

  Matrix singular = Matrix::Ones(3, 3);
  try {
    linalg::general_solve(singular, Matrix::Ones(3, 1));
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.condition_estimate() > 1e14);
  }
}

TEST_CASE("symmetric_eigenvalues ascending") {
  Matrix a(2, 2);
  a << 2, 1, 1, 2;
  const Vector e = linalg::symmetric_eigenvalues(a);
  CHECK(e(0) == doctest::Approx(1.0));
  CHECK(e(1) == doctest::Approx(3.0));
}
