#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "frontlab/errors.hpp"
#include "frontlab/spectral.hpp"

using namespace frontlab;

TEST(LinearSpeed, Formula) {
  EXPECT_DOUBLE_EQ(linear_speed(-1.0), 2.0);
  EXPECT_EQ(linear_speed(0.5), 0.0);
  EXPECT_EQ(linear_speed(0.0), 0.0);
  for (double c : {0.3, 1.0, 2.0, 7.5}) EXPECT_NEAR(linear_speed(-c * c / 4.0), c, 1e-15 * c);
}

TEST(TwEigenvalues, Examples) {
  const RootPair double_root = tw_eigenvalues(2.0, -1.0);
  EXPECT_FALSE(double_root.complex);
  EXPECT_DOUBLE_EQ(double_root.first, -1.0);
  EXPECT_DOUBLE_EQ(double_root.second, -1.0);
  const RootPair real = tw_eigenvalues(2.0, 3.0);
  EXPECT_DOUBLE_EQ(real.first, -3.0);
  EXPECT_DOUBLE_EQ(real.second, 1.0);
  const RootPair cplx = tw_eigenvalues(2.0, -2.0);
  EXPECT_TRUE(cplx.complex);
  EXPECT_DOUBLE_EQ(cplx.first, -1.0);
  EXPECT_DOUBLE_EQ(cplx.second, 1.0);
  EXPECT_THROW(tw_eigenvalues(0.0, 1.0), std::invalid_argument);
}

TEST(TwEigenvalues, Vieta) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> uc(0.1, 5.0), um(-1.0, 10.0);
  for (int k = 0; k < 200; ++k) {
    const double c = uc(rng);
    const double mu = std::max(um(rng), -c * c / 4.0);
    const RootPair r = tw_eigenvalues(c, mu);
    ASSERT_FALSE(r.complex);
    EXPECT_NEAR(r.first + r.second, -c, 1e-12);
    EXPECT_NEAR(r.first * r.second, -mu, 1e-10 * std::max(1.0, std::abs(mu)));
  }
}

TEST(PerturbedEigenvalues, Examples) {
  const PerturbedSpectrum s = perturbed_eigenvalues(2.0, {-1.0}, 3.0);
  EXPECT_NEAR(s.pairs[0].minus, 1.0 - std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(s.pairs[0].plus, 1.0 + std::sqrt(3.0), 1e-15);
  const PerturbedSpectrum edge = perturbed_eigenvalues(2.0, {-1.0}, 1.0 + 1e-10);
  EXPECT_LT(edge.pairs[0].minus, 0.0);
  EXPECT_GT(edge.pairs[0].minus, -1e-9);
  EXPECT_THROW(perturbed_eigenvalues(2.0, {-1.0}, 1.0), AdmissibilityError);
}

TEST(PerturbedEigenvalues, OrderingVietaAndMonotonicity) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const std::size_t d = 1 + k % 4;
    std::vector<double> mu{-0.5 - 3.0 * u(rng)};
    for (std::size_t j = 1; j < d; ++j) mu.push_back(mu.back() + 4.0 * u(rng));
    const double c = linear_speed(mu.front());
    const double nu = -mu.front() + 1e-3 + 5.0 * u(rng);
    const PerturbedSpectrum s = perturbed_eigenvalues(c, mu, nu);
    for (std::size_t j = 0; j < d; ++j) {
      EXPECT_LT(s.pairs[j].minus, 0.0);
      EXPECT_GT(s.pairs[j].plus, 0.0);
      EXPECT_NEAR(s.pairs[j].minus + s.pairs[j].plus, c, 1e-12);
      EXPECT_NEAR(s.pairs[j].minus * s.pairs[j].plus, -(mu[j] + nu), 1e-10 * (1.0 + mu[j] + nu));
      if (j > 0) {
        EXPECT_LE(s.pairs[j].minus, s.pairs[j - 1].minus);
        EXPECT_GE(s.pairs[j].plus, s.pairs[j - 1].plus);
      }
    }
    const PerturbedSpectrum more = perturbed_eigenvalues(c, mu, nu + 0.5);
    for (std::size_t j = 0; j < d; ++j) EXPECT_GE(more.pairs[j].plus, s.pairs[j].plus);
  }
}

TEST(NuAdmissible, Examples) {
  EXPECT_EQ(nu_admissible(2.0, {-1.0}, 1.5), NuStatus::Ok);
  EXPECT_EQ(nu_admissible(2.0, {-1.0, 100.0}, 1.01), NuStatus::FailsSecond);
  EXPECT_EQ(nu_admissible(2.0, {-1.0, 0.5}, 1.01), NuStatus::Ok);
  EXPECT_EQ(nu_admissible(2.0, {-1.0, 4.5}, 1.01), NuStatus::FailsSecond);
  EXPECT_EQ(nu_admissible(2.0, {-1.0}, 1.0), NuStatus::FailsFirst);
  EXPECT_EQ(nu_admissible(2.0, {-1.0, 0.5}, 3.0), NuStatus::Ok);
}

TEST(BarrierMargin, ExamplesAndBound) {
  EXPECT_NEAR(barrier_margin(2.0, -1.0, 3.0), 1.0 + 2.0 * std::sqrt(3.0), 1e-14);
  for (double t : {1e-2, 1e-4, 1e-8}) EXPECT_GT(barrier_margin(2.0, -1.0, 1.0 + t), 3.0);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const double c = 0.1 + 4.0 * u(rng);
    const double mu = -c * c / 4.0 + 10.0 * u(rng);
    const double nu = c * c / 4.0 + 1e-9 + 5.0 * u(rng);
    EXPECT_GE(barrier_margin(c, mu, nu), 0.75 * c * c);
  }
}

TEST(Analyze, CubicAndSaddle) {
  const SpectralReport cubic = analyze(Potential::cubic(3.0));
  EXPECT_DOUBLE_EQ(cubic.c_lin, 2.0);
  EXPECT_EQ(cubic.j0, 1);
  EXPECT_EQ(cubic.dim_hsu, 2);
  EXPECT_EQ(cubic.dim_mu, 0);
  EXPECT_FALSE(cubic.lambda_pm[0].complex);
  EXPECT_NEAR(cubic.lambda_pm[0].second, 1.0, 1e-15);

  const SpectralReport saddle = analyze(Potential::quartic_saddle({1.0, -4.0, -4.0}, 1.0));
  EXPECT_EQ(saddle.mu, (std::vector<double>{-4.0, -4.0, 1.0}));
  EXPECT_DOUBLE_EQ(saddle.c_lin, 4.0);
  EXPECT_EQ(saddle.j0, 2);
  EXPECT_EQ(saddle.dim_hsu, 5);
  EXPECT_EQ(saddle.dim_mu, 1);

  const SpectralReport quad = analyze(Potential::polynomial(1, {{0.5, {2}}}));
  EXPECT_EQ(quad.c_lin, 0.0);
}

TEST(Analyze, RotatedHessianIsDiagonalizedNumerically) {
  // V = 1/2 u^T H u + |u|^4 / 4 with H = R diag(-1, 2) R^T.
  const double s = std::sqrt(0.5);
  const Potential v = Potential::polynomial(
      2, {{0.25, {2, 0}}, {0.25, {0, 2}}, {-1.5, {1, 1}}, {0.25, {4, 0}}, {0.5, {2, 2}}, {0.25, {0, 4}}});
  const SpectralReport r = analyze(v);
  EXPECT_NEAR(r.mu[0], -1.0, 1e-12);
  EXPECT_NEAR(r.mu[1], 2.0, 1e-12);
  EXPECT_NEAR(std::abs(r.eigenvectors(0, 0)), s, 1e-12);
  EXPECT_NEAR(r.c_lin, 2.0, 1e-12);
}
