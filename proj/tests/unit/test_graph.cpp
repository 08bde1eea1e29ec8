#include "doctest.h"
#include "oracles.hpp"

#include "nysreg/errors.hpp"
#include "nysreg/graph.hpp"

#include <cmath>

using namespace nysreg;

TEST_CASE("exp_weights examples") {
  PointSet same(2, 2);
  same << 0.3, 0.4, 0.3, 0.4;
  CHECK(exp_weights(same, 0.5) == Matrix::Ones(2, 2));

  PointSet pair(2, 1);
  pair << 0.0, 2.0;
  const Matrix w = exp_weights(pair, 1.0);
  CHECK(w(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(w(0, 0) == 1.0);

  std::mt19937_64 rng(1);
  const PointSet x = oracle::random_points(rng, 6, 3);
  const Matrix w6 = exp_weights(x, 0.2);
  for (Eigen::Index i = 0; i < 6; ++i) {
    for (Eigen::Index j = 0; j < 6; ++j) {
      const double d2 = (x.row(i) - x.row(j)).squaredNorm();
      CHECK(w6(i, j) == doctest::Approx(std::exp(-d2 / 0.8)).epsilon(1e-14));
      CHECK(w6(i, j) > 0.0);
      CHECK(w6(i, j) == w6(j, i));
    }
  }
  CHECK_THROWS_AS(exp_weights(x, 0.0), InvalidArgument);
  CHECK_THROWS_AS(exp_weights(x, -1.0), InvalidArgument);
}

TEST_CASE("exp_weights over selected rows") {
  std::mt19937_64 rng(2);
  const PointSet x = oracle::random_points(rng, 5, 2);
  const Matrix all = exp_weights(x, 0.1);
  const Matrix sub = exp_weights(x, 0.1, {3, 0});
  CHECK(sub(0, 1) == all(3, 0));
}

TEST_CASE("laplacian examples") {
  Matrix w(2, 2);
  w << 0, 1, 1, 0;
  Matrix expected(2, 2);
  expected << 1, -1, -1, 1;
  CHECK(laplacian(w).laplacian == expected);
  CHECK(laplacian(Matrix::Zero(3, 3)).laplacian == Matrix::Zero(3, 3));

  Matrix asym(2, 2);
  asym << 0, 1, 0.5, 0;
  CHECK_THROWS_AS(laplacian(asym), InvalidArgument);
  Matrix neg(2, 2);
  neg << 0, -1, -1, 0;
  CHECK_THROWS_AS(laplacian(neg), InvalidArgument);
}

TEST_CASE("laplacian invariants on random weights") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 5; ++t) {
    const Matrix w = oracle::random_weights(rng, 6);
    const Matrix l = laplacian(w).laplacian;
    CHECK((l - oracle::dense_laplacian(w)).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(l.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
    for (int r = 0; r < 10; ++r) {
      const Vector f = oracle::random_matrix(rng, 6, 1);
      double pairs = 0.0;
      for (Eigen::Index i = 0; i < 6; ++i) {
        for (Eigen::Index j = 0; j < 6; ++j) pairs += w(i, j) * (f(i) - f(j)) * (f(i) - f(j));
      }
      const double quad = f.dot(l * f);
      CHECK(std::abs(quad - 0.5 * pairs) <= 1e-10 * std::abs(0.5 * pairs));
    }
    for (int r = 0; r < 100; ++r) {
      const Vector f = oracle::random_matrix(rng, 6, 1);
      CHECK(f.dot(l * f) >= -1e-12);
    }
  }
}

TEST_CASE("laplacian of exponential weights keeps the diagonal out of the degree") {
  std::mt19937_64 rng(4);
  const PointSet x = oracle::random_points(rng, 5, 2);
  const Matrix l = laplacian(exp_weights(x, 0.3)).laplacian;
  CHECK(l.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("knn_truncate keeps the strongest edges and stays symmetric") {
  Matrix w(4, 4);
  w << 1, 0.9, 0.1, 0.5,
       0.9, 1, 0.2, 0.3,
       0.1, 0.2, 1, 0.8,
       0.5, 0.3, 0.8, 1;
  const Matrix k = knn_truncate(w, 1);
  CHECK(k == k.transpose());
  CHECK(k(0, 1) == 0.9);
  CHECK(k(2, 3) == 0.8);
  CHECK(k(0, 2) == 0.0);
  CHECK(k(0, 3) == 0.0);
  CHECK(k(1, 2) == 0.0);
  CHECK(k.diagonal() == w.diagonal());
}

TEST_CASE("between_view_operator") {
  CHECK(between_view_operator(1) == Matrix::Zero(1, 1));
  Matrix two(2, 2);
  two << 1, -1, -1, 1;
  CHECK(between_view_operator(2) == two);
  for (std::size_t v = 1; v <= 5; ++v) {
    const Matrix mv = between_view_operator(v);
    CHECK((mv * Vector::Ones(static_cast<Eigen::Index>(v))).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(mv);
    const Vector e = es.eigenvalues();
    CHECK(std::abs(e(0)) <= 1e-10);
    for (Eigen::Index i = 1; i < e.size(); ++i) CHECK(std::abs(e(i) - static_cast<double>(v)) <= 1e-10);
    Eigen::FullPivLU<Matrix> lu(mv);
    CHECK(static_cast<std::size_t>(lu.rank()) == v - 1);
  }
  CHECK_THROWS_AS(between_view_operator(0), InvalidArgument);
}

TEST_CASE("between_view_penalty is I (x) M_v") {
  const GraphPenalty p = between_view_penalty(3, 2);
  CHECK(p.kind == PenaltyKind::between_view);
  Matrix expected = Matrix::Zero(6, 6);
  for (int k = 0; k < 3; ++k) expected.block(2 * k, 2 * k, 2, 2) = between_view_operator(2);
  CHECK(p.laplacian == expected);
}

TEST_CASE("multiview_block_laplacian") {
  std::mt19937_64 rng(5);
  const GraphPenalty l1 = laplacian(oracle::random_weights(rng, 3));
  const GraphPenalty l2 = laplacian(oracle::random_weights(rng, 3));

  SUBCASE("one view is the input") {
    const GraphPenalty single[] = {l1};
    CHECK(multiview_block_laplacian(single).laplacian == l1.laplacian);
  }
  SUBCASE("identical views are permutation-equivalent to I_2 (x) L") {
    const GraphPenalty same[] = {l1, l1};
    const Matrix b = multiview_block_laplacian(same).laplacian;
    // point-major p*v+i  ->  view-major i*n+p
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(6);
    for (int p = 0; p < 3; ++p) {
      for (int i = 0; i < 2; ++i) perm.indices()(p * 2 + i) = i * 3 + p;
    }
    Matrix kron = Matrix::Zero(6, 6);
    kron.topLeftCorner(3, 3) = l1.laplacian;
    kron.bottomRightCorner(3, 3) = l1.laplacian;
    CHECK((perm * b * perm.transpose() - kron).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("interleaved construction") {
    const GraphPenalty two[] = {l1, l2};
    const GraphPenalty b = multiview_block_laplacian(two);
    CHECK(b.kind == PenaltyKind::multiview_block);
    for (int p = 0; p < 3; ++p) {
      for (int q = 0; q < 3; ++q) {
        CHECK(b.laplacian(2 * p, 2 * q) == l1.laplacian(p, q));
        CHECK(b.laplacian(2 * p + 1, 2 * q + 1) == l2.laplacian(p, q));
        CHECK(b.laplacian(2 * p, 2 * q + 1) == 0.0);
        CHECK(b.laplacian(2 * p + 1, 2 * q) == 0.0);
      }
    }
    CHECK(b.laplacian.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
    Eigen::SelfAdjointEigenSolver<Matrix> es(b.laplacian);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * es.eigenvalues().maxCoeff());
  }
  SUBCASE("size mismatch") {
    const GraphPenalty l4 = laplacian(oracle::random_weights(rng, 4));
    const GraphPenalty mixed[] = {l1, l4};
    CHECK_THROWS_AS(multiview_block_laplacian(mixed), InvalidArgument);
  }
}
