#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "frontlab/errors.hpp"
#include "frontlab/spectral.hpp"
#include "frontlab/tail_fit.hpp"
#include "frontlab/tw_ode.hpp"

using namespace frontlab;

namespace {

const double kSqrt2 = std::sqrt(2.0);

Profile scalar_profile(const Grid& g, double (*f)(double)) {
  Profile p(g, 1);
  for (std::size_t i = 0; i < g.n(); ++i) p.at(i)[0] = f(g.at(i));
  return p;
}

}  // namespace

TEST(Rk4Step, EquilibriumIsFixed) {
  const TWState zero{{0.0, 0.0}, {0.0, 0.0}};
  EXPECT_EQ(rk4_step(Potential::quartic_saddle({-1.0, 1.0}, 1.0), 2.0, zero, 0.01), zero);
}

TEST(Rk4Step, ForwardBackwardRoundTripIsFifthOrder) {
  const Potential v = Potential::cubic(4.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const TWState s{{u(rng)}, {u(rng)}};
    double prev = 0.0;
    for (double h : {0.04, 0.02}) {
      const TWState back = rk4_step(v, 2.0, rk4_step(v, 2.0, s, h), -h);
      const double err = std::hypot(back.phi[0] - s.phi[0], back.varphi[0] - s.varphi[0]);
      EXPECT_LT(err, 50.0 * std::pow(h, 5));
      if (prev > 1e-14) { EXPECT_LT(err, prev / 8.0); }
      prev = err;
    }
  }
}

TEST(Rk4Step, LinearRegimeMatchesMatrixExponential) {
  // phi'' + c phi' - mu phi = 0; on each eigenvector of the 2x2 system the
  // exact flow is multiplication by e^{r xi}.
  const double mu = 3.0, c = 2.0;
  const Potential v = Potential::polynomial(1, {{0.5 * mu, {2}}});
  for (double r : {-c / 2 - std::sqrt(c * c / 4 + mu), -c / 2 + std::sqrt(c * c / 4 + mu)}) {
    double prev = 0.0;
    for (int n : {10, 20, 40}) {
      const double h = 1.0 / n;
      TWState s{{1e-6}, {r * 1e-6}};
      for (int i = 0; i < n; ++i) s = rk4_step(v, c, s, h);
      const double exact = 1e-6 * std::exp(r);
      const double err = std::abs(s.phi[0] - exact) / exact;
      EXPECT_LT(err, 1e-3);
      if (prev > 0.0) { EXPECT_NEAR(prev / err, 16.0, 3.0) << r; }
      prev = err;
    }
  }
}

TEST(Rk4Step, RejectsZeroStep) {
  const TWState s{{0.1}, {0.0}};
  EXPECT_THROW(rk4_step(Potential::cubic(1.0), 1.0, s, 0.0), std::invalid_argument);
}

TEST(Shoot, ExactSpeedConnectsToInvadingState) {
  // The linear initial condition detunes the connection by O(amplitude^2),
  // so a small amplitude is used at the unrefined closed-form speed.
  const Potential v = Potential::cubic(4.0);
  ShootOptions o;
  o.amplitude = 1e-9;
  const Profile p = shoot_front(v, 3.0 / kSqrt2, o);
  EXPECT_NEAR(p.at(0)[0], 1.0, 1e-3);
  EXPECT_LT(std::abs(p.at(p.size() - 1)[0]), 1e-11);
}

TEST(Shoot, AboveExactSpeedOvershoots) {
  const Shot s = shoot(Potential::cubic(4.0), 3.0);
  EXPECT_EQ(s.outcome, ShotOutcome::Overshoot);
  EXPECT_THROW(shoot_front(Potential::cubic(4.0), 3.0), NoFrontError);
}

TEST(Shoot, InvalidArguments) {
  ShootOptions o;
  o.amplitude = 0.0;
  EXPECT_THROW(shoot(Potential::cubic(1.0), 2.5, o), std::invalid_argument);
  EXPECT_THROW(shoot(Potential::cubic(1.0), 0.0), std::invalid_argument);
  EXPECT_THROW(shoot(Potential::cubic(1.0), 1.0), NumericError);
}

TEST(Shoot, InitialDirectionAndRate) {
  const Shot s = shoot(Potential::quartic_saddle({2.0, -1.0}, 1.0), 2.5);
  const RootPair r = tw_eigenvalues(2.5, -1.0);
  EXPECT_DOUBLE_EQ(s.decay_rate, -r.first);
  EXPECT_EQ(std::abs(s.direction[1]), 1.0);
  EXPECT_EQ(s.direction[0], 0.0);
  EXPECT_NEAR(s.states[0].varphi[1] / s.states[0].phi[1], r.first, 1e-15);
}

TEST(Steepness, Examples) {
  const Grid g(0.0, 40.0, 40001);
  EXPECT_NEAR(measure_steepness(scalar_profile(g, [](double x) { return std::exp(-x); })), 1.0, 1e-10);
  EXPECT_NEAR(measure_steepness(cubic_exact_front(4.0, Grid(-10.0, 30.0, 40001))), kSqrt2, 1e-5);
  const Grid deep(1.0, 200.0, 19901);
  const Profile poly = scalar_profile(deep, [](double x) { return x * std::exp(-x); });
  EXPECT_NEAR(measure_steepness(poly, FitWindow{1e-60, 1e-40, 32}), 1.0, 1e-2);
}

TEST(Steepness, TooFewSamplesThrows) {
  const Grid g(0.0, 5.0, 51);
  EXPECT_THROW(measure_steepness(scalar_profile(g, [](double x) { return std::exp(-x); })), NumericError);
}

TEST(TailFit, RejectsNonMonotoneWindow) {
  std::vector<double> xi, amp;
  for (int i = 0; i < 100; ++i) {
    xi.push_back(i * 0.1);
    amp.push_back(1e-6 * (1.5 + std::sin(i * 0.3)));
  }
  EXPECT_THROW(fit_exponential_tail(xi, amp), NumericError);
}

TEST(ClassifyFront, Examples) {
  const double tol = default_class_tol(2.0);
  EXPECT_EQ(classify_front(3.0 / kSqrt2, kSqrt2, 2.0, tol), FrontClass::Pushed);
  EXPECT_EQ(classify_front(2.0, 1.0, 2.0, tol), FrontClass::Pulled);
  EXPECT_EQ(classify_front(2.4, 0.9, 2.0, tol), FrontClass::Mild);
  EXPECT_DOUBLE_EQ(tol, 0.04);
}

TEST(ClassifyFront, InvariantUnderAmplitudeScaling) {
  const Grid g(-10.0, 30.0, 40001);
  Profile p = cubic_exact_front(4.0, g);
  const double l1 = measure_steepness(p);
  for (double& x : p.values()) x *= 1e-3;
  const double l2 = measure_steepness(p, FitWindow{1e-13, 1e-7, 32});
  const double c = cubic_exact_speed(4.0), tol = default_class_tol(2.0);
  EXPECT_NEAR(l1, l2, 1e-6);
  EXPECT_EQ(classify_front(c, l1, 2.0, tol), classify_front(c, l2, 2.0, tol));
}

TEST(Residual, ExactFrontAndPerturbations) {
  const Grid g(-20.0, 20.0, 40001);
  const Potential v = Potential::cubic(4.0);
  const Profile p = cubic_exact_front(4.0, g);
  EXPECT_LE(residual(v, 3.0 / kSqrt2, p), 1e-6);
  EXPECT_GE(residual(v, 3.0 / kSqrt2 + 0.1, p), 1e-3);
  EXPECT_EQ(residual(v, 2.0, Profile(g, 1)), 0.0);
  for (double b : {0.5, 1.0, 3.0, 8.0})
    EXPECT_LE(residual(Potential::cubic(b), cubic_exact_speed(b), cubic_exact_front(b, g)), 1e-6) << b;
}

TEST(FindPushedSpeed, CubicFour) {
  const Potential v = Potential::cubic(4.0);
  const PushedSpeed r = find_pushed_speed(v, 2.0, 2.5, 1e-8);
  EXPECT_NEAR(r.c, 3.0 / kSqrt2, 1e-6);
  EXPECT_LE(r.c_high - r.c_low, 1e-8);
  EXPECT_LE(r.c_low, r.front.c);
  EXPECT_LE(r.front.c, r.c_high);
  EXPECT_NEAR(r.front.steepness, kSqrt2, 1e-3);
  EXPECT_EQ(r.front.classification, FrontClass::Pushed);
  EXPECT_LT(r.front.residual, 1e-5);
  const HypothesisReport h = check_hypotheses(v, 10.0, 200);
  ASSERT_TRUE(h.coercive);
  double sup = 0.0;
  for (std::size_t i = 0; i < r.front.profile.size(); ++i) sup = std::max(sup, r.front.profile.norm_at(i));
  EXPECT_LE(sup, h.sample_radius);
}

TEST(FindPushedSpeed, CubicThree) {
  const PushedSpeed r = find_pushed_speed(Potential::cubic(3.0), 2.0, 2.4, 1e-8);
  EXPECT_NEAR(r.c, std::sqrt(1.5) + std::sqrt(2.0 / 3.0), 1e-6);
  EXPECT_NEAR(r.front.steepness, std::sqrt(1.5), 1e-3);
}

TEST(FindPushedSpeed, PulledRegimeHasNoBracket) {
  EXPECT_THROW(find_pushed_speed(Potential::cubic(1.0), 2.0, 3.0, 1e-6), BracketError);
}

TEST(FindPushedSpeed, NonInvariantAxisRejected) {
  const Potential v = Potential::polynomial(2, {{-0.5, {2, 0}}, {0.5, {0, 2}}, {1.0, {2, 1}}, {0.25, {4, 0}}, {0.25, {0, 4}}});
  EXPECT_THROW(find_pushed_speed(v, 2.0, 3.0, 1e-6), ConfigError);
}

TEST(FindPushedSpeed, IndependentOfInitialAmplitude) {
  const Potential v = Potential::cubic(4.0);
  const double tol = 1e-6;
  std::vector<double> speeds;
  for (double a : {1e-6, 1e-5, 1e-4}) {
    ShootOptions o;
    o.amplitude = a;
    speeds.push_back(find_pushed_speed(v, 2.0, 2.5, tol, o).c);
  }
  for (double c : speeds) EXPECT_NEAR(c, speeds.front(), tol);
}
