#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "frontlab/kernels.hpp"
#include "frontlab/parallel.hpp"

using namespace frontlab;

namespace {

std::vector<double> random_states(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  std::vector<double> w(n * d);
  for (double& x : w) x = u(rng);
  return w;
}

struct ThreadGuard {
  int saved = parallel::max_threads();
  ~ThreadGuard() { parallel::set_threads(saved); }
};

}  // namespace

class KernelAgreement : public ::testing::TestWithParam<std::size_t> {};

TEST_P(KernelAgreement, EnergyAndGradientMatchSerial) {
  const std::size_t n = GetParam();
  const Potential v = Potential::quartic_saddle({-1.0, 0.5}, 1.0);
  const Grid grid(-20.0, 40.0, n);
  const auto wts = kernels::energy_weights(grid, 0.8);
  const auto w = random_states(n, 2, n);
  kernels::Scratch scratch;
  const double es = kernels::energy_serial(v, wts, w);
  const double ep = kernels::energy_parallel(v, wts, w, scratch);
  EXPECT_NEAR(ep, es, 1e-12 * std::abs(es));
  std::vector<double> gs(w.size()), gp(w.size());
  const double egs = kernels::energy_gradient_serial(v, wts, w, gs);
  const double egp = kernels::energy_gradient_parallel(v, wts, w, gp, scratch);
  EXPECT_NEAR(egs, es, 1e-12 * std::abs(es));
  EXPECT_NEAR(egp, es, 1e-12 * std::abs(es));
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_DOUBLE_EQ(gp[i], gs[i]);
}

TEST_P(KernelAgreement, MolRhsMatchesSerialExactly) {
  const std::size_t n = GetParam();
  const Potential v = Potential::cubic(2.0);
  const auto u = random_states(n, 1, 3 * n);
  std::vector<double> ds(n), dp(n);
  kernels::mol_rhs_serial(v, u, 100.0, ds);
  kernels::mol_rhs_parallel(v, u, 100.0, dp);
  EXPECT_EQ(ds, dp);
}

INSTANTIATE_TEST_SUITE_P(Sizes, KernelAgreement, ::testing::Values(16, 2047, 2049, 50001));

TEST(Kernels, ParallelResultsIndependentOfThreadCount) {
  ThreadGuard guard;
  const std::size_t n = 40000;
  const Potential v = Potential::quartic_saddle({-1.0, 0.5}, 1.0);
  const auto wts = kernels::energy_weights(Grid(-20.0, 60.0, n), 1.3);
  const auto w = random_states(n, 2, 99);
  kernels::Scratch scratch;
  std::vector<double> g_ref(w.size()), g(w.size());
  parallel::set_threads(1);
  const double e_ref = kernels::energy_parallel(v, wts, w, scratch);
  const double eg_ref = kernels::energy_gradient_parallel(v, wts, w, g_ref, scratch);
  for (int t : {2, 3, 4, 8}) {
    parallel::set_threads(t);
    EXPECT_EQ(kernels::energy_parallel(v, wts, w, scratch), e_ref) << t;
    EXPECT_EQ(kernels::energy_gradient_parallel(v, wts, w, g, scratch), eg_ref) << t;
    EXPECT_EQ(g, g_ref) << t;
  }
}

TEST(Kernels, WeightsFollowQuadratureRules) {
  const Grid grid(-2.0, 3.0, 51);
  const double c = 0.7, h = grid.h();
  const auto wts = kernels::energy_weights(grid, c);
  ASSERT_EQ(wts.mass.size(), 51u);
  ASSERT_EQ(wts.kinetic.size(), 50u);
  EXPECT_NEAR(wts.mass.front(), 0.5 * h * std::exp(c * -2.0), 1e-15);
  EXPECT_NEAR(wts.mass[10], h * std::exp(c * grid.at(10)), 1e-15);
  EXPECT_NEAR(wts.kinetic[10], std::exp(c * (grid.at(10) + 0.5 * h)) / h, 1e-12);
}

TEST(Kernels, ZeroProfileHasZeroEnergyAndGradient) {
  for (double c : {0.1, 2.0, 5.0}) {
    const Potential v = Potential::cubic(1.0);
    const auto wts = kernels::energy_weights(Grid(-10.0, 10.0, 3001), c);
    const std::vector<double> w(3001, 0.0);
    std::vector<double> g(3001, 1.0);
    kernels::Scratch s;
    EXPECT_EQ(kernels::energy_parallel(v, wts, w, s), 0.0);
    EXPECT_EQ(kernels::energy_gradient_parallel(v, wts, w, g, s), 0.0);
    for (double x : g) EXPECT_EQ(x, 0.0);
  }
}

TEST(Kernels, MolRhsNeumannEnds) {
  const Potential v = Potential::polynomial(1, {{0.5, {2}}});
  const std::vector<double> u{1.0, 2.0, 4.0, 7.0};
  std::vector<double> du(4);
  kernels::mol_rhs_serial(v, u, 1.0, du);
  EXPECT_DOUBLE_EQ(du[0], 2.0 * (2.0 - 1.0) - 1.0);
  EXPECT_DOUBLE_EQ(du[1], 1.0 - 4.0 + 4.0 - 2.0);
  EXPECT_DOUBLE_EQ(du[3], 2.0 * (4.0 - 7.0) - 7.0);
}
