#ifndef NYSREG_TESTS_INSTANCES_HPP
#define NYSREG_TESTS_INSTANCES_HPP

#include "oracles.hpp"

#include "nysreg/graph.hpp"
#include "nysreg/kernels.hpp"
#include "nysreg/solver.hpp"

#include <memory>
#include <random>

namespace testutil {

struct Instance {
  nysreg::Dataset data;
  nysreg::KernelSpec kernel;
  nysreg::RegularizationConfig config;
  nysreg::IndexList landmarks;
};

/// Random semi-supervised problem with a Gaussian kernel and one or two
/// graph penalties built from exponential weights.
inline Instance random_instance(std::uint64_t seed, std::size_t n, std::size_t m, std::size_t d,
                                std::size_t p, std::size_t s, bool times_m = true) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Instance inst;
  inst.data.x = oracle::random_points(rng, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  inst.data.y = oracle::random_matrix(rng, static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p));
  inst.kernel = nysreg::KernelSpec::gaussian(0.5 + 2.0 * u(rng));
  inst.config.lambda0 = std::pow(10.0, -3.0 + 2.0 * u(rng));
  inst.config.scaling = times_m ? nysreg::LaplacianScaling::times_m : nysreg::LaplacianScaling::none;
  const std::size_t terms = 1 + static_cast<std::size_t>(seed % 2);
  for (std::size_t j = 0; j < terms; ++j) {
    auto pen = std::make_shared<const nysreg::GraphPenalty>(
        nysreg::laplacian(nysreg::exp_weights(inst.data.x, 0.05 + 0.5 * u(rng))));
    inst.config.graph_penalties.push_back({std::pow(10.0, -3.0 + 2.0 * u(rng)), pen});
  }
  inst.landmarks = nysreg::select_landmarks(n, s, nysreg::LandmarkMode::uniform, seed + 17);
  return inst;
}

inline std::vector<std::pair<double, nysreg::Matrix>> penalty_list(const nysreg::RegularizationConfig& c) {
  std::vector<std::pair<double, nysreg::Matrix>> out;
  for (const auto& t : c.graph_penalties) out.emplace_back(t.lambda, t.penalty->laplacian);
  return out;
}

}  // namespace testutil

#endif  // NYSREG_TESTS_INSTANCES_HPP
