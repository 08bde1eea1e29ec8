#include "doctest.h"
#include "oracles.hpp"

#include "nysreg/errors.hpp"
#include "nysreg/graph.hpp"
#include "nysreg/multiview.hpp"
#include "nysreg/solver.hpp"

#include <cmath>
#include <limits>

#include <unsupported/Eigen/KroneckerProduct>

using namespace nysreg;

namespace {

struct MvInstance {
  Dataset data;
  MultiViewKernel kernel;
  GraphPenalty block;
  CombinationWeights weights;
  MultiViewConfig config;
};

MvInstance make_instance(std::uint64_t seed, Eigen::Index n, Eigen::Index m, Eigen::Index p) {
  std::mt19937_64 rng(seed);
  MvInstance inst;
  inst.data.x = oracle::random_points(rng, n, 4);
  inst.data.y = oracle::random_matrix(rng, m, p);
  inst.kernel = {{KernelSpec::gaussian(1.5), KernelSpec::gaussian(0.7)}, {{0, 2}, {2, 2}}};
  std::vector<GraphPenalty> per_view;
  for (const auto& slice : inst.kernel.slices) {
    const PointSet xv = inst.data.x.middleCols(static_cast<Eigen::Index>(slice.offset),
                                               static_cast<Eigen::Index>(slice.width));
    per_view.push_back(laplacian(exp_weights(xv, 0.2)));
  }
  inst.block = multiview_block_laplacian(per_view);
  Vector dir(2);
  dir << 0.8, 0.6;
  inst.weights = CombinationWeights::on_sphere(dir);
  inst.config = {1e-2, 3e-2, 5e-2};
  return inst;
}

double objective(const MvInstance& inst, const IndexList& landmarks, const Matrix& a) {
  const PointSet lm = select_rows(inst.data.x, landmarks);
  const Matrix g_ns = multiview_gram(inst.kernel, inst.data.x, lm);
  const Matrix g_ss = multiview_gram(inst.kernel, lm, lm);
  const Matrix between = between_view_penalty(inst.data.n(), 2).laplacian;
  return oracle::multiview_objective(g_ns, g_ss, a, inst.data.y, inst.weights.c, inst.config.lambda_a,
                                     inst.config.lambda_b, between, inst.config.lambda_w,
                                     inst.block.laplacian);
}

}  // namespace

TEST_CASE("combination weights live on the sphere") {
  const auto u = CombinationWeights::uniform(4, 2.0);
  CHECK(std::abs(u.c.norm() - 2.0) <= 1e-12);
  CHECK(u.c(0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(CombinationWeights::uniform(0), InvalidArgument);
  CHECK_THROWS_AS(CombinationWeights::on_sphere(Vector::Zero(2)), InvalidArgument);
}

TEST_CASE("assemble_B examples") {
  std::mt19937_64 rng(1);
  const PointSet x = oracle::random_points(rng, 4, 2);

  SUBCASE("single view without penalties is the masked Gram") {
    MultiViewKernel k{{KernelSpec::gaussian(1.0)}, {{0, 2}}};
    const Matrix g = multiview_gram(k, x, x);
    const GraphPenalty lap = laplacian(exp_weights(x, 0.3));
    const Matrix b = assemble_B(g, CombinationWeights::uniform(1), 0.0, 0.0, lap, 2, 4);
    Matrix expected = g;
    expected.bottomRows(2).setZero();
    CHECK(b == expected);
  }
  SUBCASE("two views, one labeled point, c = e_1") {
    MultiViewKernel k{{KernelSpec::gaussian(1.0), KernelSpec::linear()}, {{0, 1}, {1, 1}}};
    const PointSet one = x.topRows(1);
    const Matrix g = multiview_gram(k, one, one);
    Vector e1(2);
    e1 << 1, 0;
    const GraphPenalty lap = laplacian(Matrix::Zero(2, 2));
    const Matrix b = assemble_B(g, CombinationWeights::on_sphere(e1), 0.0, 0.0, lap, 1, 1);
    CHECK(b(0, 0) == g(0, 0));
    CHECK(b(0, 1) == 0.0);
    CHECK(b(1, 0) == 0.0);
    CHECK(b(1, 1) == 0.0);
  }
  SUBCASE("matches the dense Kronecker construction") {
    const PointSet x3 = x.topRows(3);
    MultiViewKernel k{{KernelSpec::gaussian(2.0), KernelSpec::gaussian(0.5)}, {{0, 1}, {1, 1}}};
    const Matrix g = multiview_gram(k, x3, x3);
    std::vector<GraphPenalty> per_view{laplacian(oracle::random_weights(rng, 3)),
                                       laplacian(oracle::random_weights(rng, 3))};
    const GraphPenalty block = multiview_block_laplacian(per_view);
    Vector dir(2);
    dir << 0.3, -1.1;
    const CombinationWeights w = CombinationWeights::on_sphere(dir);
    const double lb = 0.7;
    const double lw = 0.4;
    const std::size_t m = 2;
    Matrix j = Matrix::Zero(3, 3);
    j(0, 0) = j(1, 1) = 1.0;
    const Matrix kron_j = Eigen::kroneckerProduct(j, Matrix(w.c * w.c.transpose())).eval();
    const Matrix kron_m = Eigen::kroneckerProduct(Matrix::Identity(3, 3), between_view_operator(2)).eval();
    const Matrix expected = (kron_j + 2.0 * lb * kron_m + 2.0 * lw * block.laplacian) * g;
    const Matrix b = assemble_B(g, w, lb, lw, block, m, 3);
    CHECK((b - expected).cwiseAbs().maxCoeff() <= 1e-13);
  }
  SUBCASE("shape errors") {
    const GraphPenalty lap = laplacian(Matrix::Zero(2, 2));
    CHECK_THROWS_AS(assemble_B(Matrix::Zero(3, 2), CombinationWeights::uniform(2), 0, 0, lap, 1, 2),
                    InvalidArgument);
  }
}

TEST_CASE("combination_targets") {
  Matrix y(2, 1);
  y << 2, -1;
  Vector c(2);
  c << 0.6, 0.8;
  const Matrix yc = combination_targets(y, {c, 1.0}, 3);
  REQUIRE(yc.rows() == 6);
  CHECK(yc(0, 0) == doctest::Approx(1.2));
  CHECK(yc(1, 0) == doctest::Approx(1.6));
  CHECK(yc(2, 0) == doctest::Approx(-0.6));
  CHECK(yc(3, 0) == doctest::Approx(-0.8));
  CHECK(yc.bottomRows(2) == Matrix::Zero(2, 1));
}

TEST_CASE("single view without penalties is kernel ridge on the labeled points") {
  std::mt19937_64 rng(2);
  Dataset d;
  d.x = oracle::random_points(rng, 7, 2);
  d.y = oracle::random_matrix(rng, 5, 1);
  MultiViewKernel k{{KernelSpec::gaussian(1.2)}, {{0, 2}}};
  const GraphPenalty lap = laplacian(exp_weights(d.x, 0.3));
  const MultiViewModel model = fit_multiview(d, k, {}, CombinationWeights::uniform(1), {0.05, 0.0, 0.0}, lap);
  Matrix y_n = Matrix::Zero(7, 1);
  y_n.topRows(5) = d.y;
  const Matrix c = fit_full_manifold(gram(k.views[0], d.x), y_n, 5, 0.05);
  CHECK(oracle::max_relative(model.coefficients, c) <= 1e-10);
}

TEST_CASE("zero labels give zero coefficients") {
  auto inst = make_instance(3, 6, 4, 3);
  inst.data.y.setZero();
  const MultiViewModel model = fit_multiview(inst.data, inst.kernel, {}, inst.weights, inst.config, inst.block);
  CHECK(model.coefficients.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("full multi-view fit: residual, uniqueness and optimality") {
  auto inst = make_instance(4, 6, 4, 3);
  const MultiViewModel model = fit_multiview(inst.data, inst.kernel, {}, inst.weights, inst.config, inst.block);
  const Matrix g = multiview_gram(inst.kernel, inst.data.x, inst.data.x);
  Matrix system = assemble_B(g, inst.weights, inst.config.lambda_b, inst.config.lambda_w, inst.block, 4, 6);
  system.diagonal().array() += 4.0 * inst.config.lambda_a;
  const Matrix yc = combination_targets(inst.data.y, inst.weights, 6);
  CHECK((system * model.coefficients - yc).norm() <= 1e-8 * yc.norm());

  const Matrix other = system.fullPivLu().solve(yc);
  const PointSet q = inst.data.x;
  MultiViewModel alt = model;
  alt.coefficients = other;
  CHECK(oracle::max_relative(alt.predict(q), model.predict(q)) <= 1e-10);

  const IndexList all = iota_indices(6);
  const double base = objective(inst, all, model.coefficients);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    Matrix dir = oracle::random_matrix(rng, 12, 3);
    dir *= 1e-3 / dir.norm();
    CHECK(objective(inst, all, model.coefficients + dir) >= base - 1e-12);
  }
}

TEST_CASE("landmark multi-view fit minimizes the restricted objective") {
  for (std::uint64_t seed = 10; seed < 14; ++seed) {
    auto inst = make_instance(seed, 7, 4, 2);
    const IndexList lm{5, 1, 3};
    const MultiViewModel model = fit_multiview(inst.data, inst.kernel, lm, inst.weights, inst.config, inst.block);
    REQUIRE(model.coefficients.rows() == 6);
    auto j = [&](const Vector& x) { return objective(inst, lm, oracle::unflatten(x, 6, 2)); };
    const auto best = oracle::minimize_quadratic(j, 12);
    const double gap = j(oracle::flatten(model.coefficients)) - best.value;
    CHECK(gap <= 1e-8);
    CHECK(gap >= -1e-8);
  }
}

TEST_CASE("landmarks equal to all points reproduce the full fit") {
  auto inst = make_instance(20, 6, 4, 2);
  const MultiViewModel full = fit_multiview(inst.data, inst.kernel, {}, inst.weights, inst.config, inst.block);
  const MultiViewModel same =
      fit_multiview(inst.data, inst.kernel, iota_indices(6), inst.weights, inst.config, inst.block);
  CHECK(same.coefficients == full.coefficients);
}

TEST_CASE("fit_multiview errors") {
  auto inst = make_instance(21, 6, 4, 2);
  MultiViewConfig bad = inst.config;
  bad.lambda_a = 0.0;
  CHECK_THROWS_AS(fit_multiview(inst.data, inst.kernel, {}, inst.weights, bad, inst.block), InvalidArgument);
  CHECK_THROWS_AS(fit_multiview(inst.data, inst.kernel, {}, CombinationWeights::uniform(3), inst.config, inst.block),
                  InvalidArgument);
  CHECK_THROWS_AS(fit_multiview(inst.data, inst.kernel, {0, 0}, inst.weights, inst.config, inst.block),
                  InvalidArgument);
}

TEST_CASE("optimize_combination") {
  std::mt19937_64 rng(30);
  const Matrix y = oracle::random_matrix(rng, 40, 1);

  SUBCASE("single view returns alpha") {
    const std::vector<Matrix> views{y};
    const auto w = optimize_combination(views, y, 1.5);
    REQUIRE(w.size() == 1);
    CHECK(w.c(0) == doctest::Approx(1.5));
  }
  SUBCASE("exact view dominates a noise view") {
    const std::vector<Matrix> views{y, oracle::random_matrix(rng, 40, 1)};
    const auto w = optimize_combination(views, y, 1.0);
    CHECK(std::abs(w.c(0)) > std::abs(w.c(1)));
    CHECK(std::abs(w.c.norm() - 1.0) <= 1e-10);
    // Compare with a fine grid over the circle.
    double grid_best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 20000; ++k) {
      const double t = 2.0 * M_PI * k / 20000.0;
      Vector c(2);
      c << std::cos(t), std::sin(t);
      grid_best = std::min(grid_best, combination_loss(views, y, c));
    }
    CHECK(combination_loss(views, y, w.c) <= grid_best + 1e-6);
  }
  SUBCASE("duplicate views: no worse than the uniform start") {
    const Matrix f = 0.5 * y + 0.1 * oracle::random_matrix(rng, 40, 1);
    const std::vector<Matrix> views{f, f};
    const auto w = optimize_combination(views, y, 1.0);
    CHECK(combination_loss(views, y, w.c) <= combination_loss(views, y, CombinationWeights::uniform(2).c));
  }
  SUBCASE("random views stay on the sphere and never lose to the start") {
    for (int t = 0; t < 10; ++t) {
      std::vector<Matrix> views;
      for (int i = 0; i < 4; ++i) views.push_back(oracle::random_matrix(rng, 40, 1));
      const auto w = optimize_combination(views, y, 2.0, {25, 5, static_cast<std::uint64_t>(t)});
      CHECK(std::abs(w.c.norm() - 2.0) <= 1e-10);
      CHECK(combination_loss(views, y, w.c) <= combination_loss(views, y, CombinationWeights::uniform(4, 2.0).c));
    }
  }
  SUBCASE("empty validation set") {
    const std::vector<Matrix> views{Matrix(0, 1), Matrix(0, 1)};
    CHECK_THROWS_AS(optimize_combination(views, Matrix(0, 1), 1.0), InvalidArgument);
  }
}

TEST_CASE("argmax_class and classify_multiview") {
  RowVector s(3);
  s << -1, 1, -1;
  CHECK(argmax_class(s) == 1);  // second class
  s << 0.5, 0.5, 0.5;
  CHECK(argmax_class(s) == 0);

  auto inst = make_instance(40, 8, 6, 3);
  std::vector<std::size_t> labels{0, 1, 2, 1, 0, 2};
  inst.data.y = one_vs_rest_codes(labels, 3);
  const MultiViewModel model = fit_multiview(inst.data, inst.kernel, {}, inst.weights, inst.config, inst.block);
  std::mt19937_64 rng(41);
  const PointSet q = oracle::random_points(rng, 20, 4);
  const auto classes = classify_multiview(model, q);
  const auto views = model.predict_views(q);
  for (Eigen::Index r = 0; r < 20; ++r) {
    RowVector combined = inst.weights.c(0) * views[0].row(r) + inst.weights.c(1) * views[1].row(r);
    Eigen::Index best = 0;
    combined.maxCoeff(&best);
    CHECK(classes[static_cast<std::size_t>(r)] == static_cast<std::size_t>(best));
  }
}

TEST_CASE("one_vs_rest_codes") {
  const Matrix y = one_vs_rest_codes({2, 0}, 3);
  Matrix expected(2, 3);
  expected << -1, -1, 1, 1, -1, -1;
  CHECK(y == expected);
  CHECK_THROWS_AS(one_vs_rest_codes({3}, 3), InvalidArgument);
}
