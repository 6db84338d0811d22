#include <gtest/gtest.h>

#include <cmath>

#include "frontlab/errors.hpp"
#include "frontlab/pde.hpp"
#include "frontlab/tw_ode.hpp"

using namespace frontlab;

namespace {

SimConfig small_config(double b, double t_end) {
  SimConfig cfg;
  cfg.potential = Potential::cubic(b);
  cfg.half_width = 60.0;
  cfg.t_end = t_end;
  cfg.snapshot_every = 0.5;
  return cfg;
}

double sup_norm(const std::vector<double>& u) {
  double m = 0.0;
  for (double x : u) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(Simulate, ZeroDataStaysZero) {
  SimConfig cfg = small_config(1.0, 2.0);
  cfg.initial = CustomInit{std::vector<double>(node_count(cfg.half_width, cfg.dx), 0.0)};
  const Simulation sim = simulate(cfg);
  for (const Snapshot& s : sim.snapshots)
    for (double x : s.u) EXPECT_EQ(x, 0.0);
}

TEST(Simulate, InvadingEquilibriumIsStationary) {
  SimConfig cfg = small_config(4.0, 2.0);
  cfg.initial = CustomInit{std::vector<double>(node_count(cfg.half_width, cfg.dx), 1.0)};
  const Simulation sim = simulate(cfg);
  for (const Snapshot& s : sim.snapshots)
    for (double x : s.u) EXPECT_NEAR(x, 1.0, 1e-14);
}

TEST(Simulate, RejectsUnstableTimeStep) {
  SimConfig cfg = small_config(1.0, 1.0);
  cfg.dt = 0.41 * cfg.dx * cfg.dx;
  EXPECT_THROW(simulate(cfg), ConfigError);
  cfg.dt = 0.002;
  cfg.initial = CustomInit{std::vector<double>(7, 0.0)};
  EXPECT_THROW(simulate(cfg), ConfigError);
}

TEST(Simulate, SnapshotsAtRequestedTimes) {
  const Simulation sim = simulate(small_config(1.0, 3.0));
  ASSERT_EQ(sim.snapshots.size(), 7u);
  for (std::size_t k = 0; k < sim.snapshots.size(); ++k) EXPECT_NEAR(sim.snapshots[k].t, 0.5 * k, 1e-12);
  EXPECT_EQ(sim.steps, 1500u);
}

TEST(Simulate, DeterministicAcrossRuns) {
  const SimConfig cfg = small_config(4.0, 3.0);
  EXPECT_EQ(simulate(cfg).snapshots, simulate(cfg).snapshots);
}

TEST(FitSpeed, TranslatingExactFront) {
  const double c = cubic_exact_speed(4.0);
  const Grid x(-50.0, 50.0, 1001);
  std::vector<double> times, positions;
  for (int k = 0; k <= 40; ++k) {
    const double t = 0.5 * k;
    std::vector<double> u(x.n());
    for (std::size_t i = 0; i < x.n(); ++i) u[i] = 1.0 / (1.0 + std::exp(std::sqrt(2.0) * (x.at(i) + 20.0 - c * t)));
    times.push_back(t);
    positions.push_back(*front_position(x, 1, u, 0.5));
  }
  const SpeedFit f = fit_speed(times, positions, 0.0);
  EXPECT_NEAR(f.slope, c, 1e-3);
  EXPECT_EQ(f.samples, 41u);
}

TEST(FitSpeed, StationaryProfile) {
  const std::vector<double> t{0, 1, 2, 3, 4}, x{5, 5, 5, 5, 5};
  const SpeedFit f = fit_speed(t, x, 1.0);
  EXPECT_EQ(f.slope, 0.0);
  EXPECT_EQ(f.samples, 4u);
}

TEST(FrontPosition, ScansFromTheRight) {
  const Grid x(0.0, 9.0, 16);
  std::vector<double> u(16, 0.0);
  u[2] = 1.0;
  u[8] = 1.0;
  u[9] = 0.0;
  const auto p = front_position(x, 1, u, 0.5);
  ASSERT_TRUE(p.has_value());
  EXPECT_NEAR(*p, x.at(8) + 0.5 * x.h(), 1e-12);
  EXPECT_FALSE(front_position(x, 1, std::vector<double>(16, 0.1), 0.5).has_value());
}

TEST(LeadingEdge, SyntheticExponentialTail) {
  const Grid x(0.0, 20.0, 2001);
  std::vector<double> u(x.n());
  for (std::size_t i = 0; i < x.n(); ++i) u[i] = std::exp(-2.0 * x.at(i));
  EXPECT_NEAR(leading_edge_decay(x, 1, u, 0.5), 2.0, 1e-10);
}

TEST(Recentered, ShiftsAxis) {
  const Grid x(-10.0, 10.0, 201);
  std::vector<double> u(x.n(), 0.25);
  const Profile p = recentered(x, 1, u, 3.0);
  EXPECT_NEAR(p.grid().xi_min(), -13.0, 1e-12);
  EXPECT_NEAR(p.grid().xi_max(), 7.0, 1e-12);
  EXPECT_EQ(p.at(4)[0], 0.25);
}

TEST(TrackFront, PushedFrontShortRun) {
  SimConfig cfg = small_config(4.0, 30.0);
  const Simulation sim = simulate(cfg);
  EXPECT_FALSE(sim.contaminated);
  for (const Snapshot& s : sim.snapshots) EXPECT_LE(sup_norm(s.u), 1.0 + 1e-12);
  const FrontTrack tr = track_front(sim, 0.5);
  EXPECT_NEAR(tr.speed_fit.slope, cubic_exact_speed(4.0), 0.02 * cubic_exact_speed(4.0));
  EXPECT_NEAR(tr.edge_lambda, std::sqrt(2.0), 0.05 * std::sqrt(2.0));
}

TEST(TrackFront, GridRefinementChangesSpeedLittle) {
  SimConfig coarse = small_config(4.0, 30.0);
  coarse.dx = 0.2;
  coarse.dt = 0.008;
  const double s_coarse = track_front(simulate(coarse), 0.5).speed_fit.slope;
  const double s_fine = track_front(simulate(small_config(4.0, 30.0)), 0.5).speed_fit.slope;
  EXPECT_NEAR(s_coarse, s_fine, 0.01);
}

TEST(TrackFront, BoundaryContaminationIsFlagged) {
  SimConfig cfg = small_config(4.0, 30.0);
  cfg.half_width = 20.0;
  EXPECT_TRUE(simulate(cfg).contaminated);
}

TEST(TrackFront, PulledFrontApproachesLinearSpeedFromBelow) {
  SimConfig cfg;
  cfg.potential = Potential::cubic(1.0);
  const Simulation sim = simulate(cfg);
  EXPECT_FALSE(sim.contaminated);
  const FrontTrack tr = track_front(sim, 0.5);
  EXPECT_GE(tr.speed_fit.slope, 1.85);
  EXPECT_LE(tr.speed_fit.slope, 2.0);
  EXPECT_NEAR(tr.edge_lambda, 1.0, 0.1);
}
