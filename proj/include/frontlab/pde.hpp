#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "frontlab/potential.hpp"
#include "frontlab/profile.hpp"
#include "frontlab/tail_fit.hpp"

namespace frontlab {

/// u0 = level * axis on [-L, -L + width], 0 elsewhere. An empty axis means
/// the first eigenvector of D^2V(0).
struct StepInit {
  double level = 1.0;
  double width = 20.0;
  std::vector<double> axis;
};

/// u0 = amp * exp(-(x + L)^2 / (2 sigma^2)) * axis, centred on the left wall.
struct GaussianInit {
  double amp = 1.0;
  double sigma = 5.0;
  std::vector<double> axis;
};

/// Row-major nx x d nodal values.
struct CustomInit {
  std::vector<double> values;
};

using InitialData = std::variant<StepInit, GaussianInit, CustomInit>;

struct SimConfig {
  Potential potential = Potential::cubic(1.0);
  double half_width = 300.0;  // L; the domain is [-L, L]
  double dx = 0.1;
  double dt = 0.002;
  double t_end = 200.0;
  double snapshot_every = 1.0;
  InitialData initial = StepInit{};
  /// Crossing level used for the post-hoc boundary-contamination check.
  double watch_level = 0.5;
};

struct Snapshot {
  double t = 0.0;
  std::vector<double> u;
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct Simulation {
  Grid x;
  std::size_t d = 1;
  double dt = 0.0;
  std::size_t steps = 0;
  std::vector<Snapshot> snapshots;
  /// The front came within 10 dx of the right wall at some snapshot.
  bool contaminated = false;
};

/// Number of nodes for a half width L and spacing dx.
std::size_t node_count(double half_width, double dx);

/// Method of lines (second difference, Neumann mirror ends) with explicit
/// RK4 in time. Throws ConfigError when dt > 0.4 dx^2 or inputs are
/// inconsistent, and NumericError if the state stops being finite.
Simulation simulate(const SimConfig& cfg);

/// Rightmost x where |u| crosses `level`, scanning from the right and
/// interpolating linearly between nodes.
std::optional<double> front_position(const Grid& x, std::size_t d, std::span<const double> u,
                                     double level);

struct SpeedFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms deviation from the fitted line
  std::size_t samples = 0;
  friend bool operator==(const SpeedFit&, const SpeedFit&) = default;
};

struct FrontTrack {
  std::vector<double> times;
  std::vector<double> positions;
  SpeedFit speed_fit;
  double edge_lambda = 0.0;  // NaN when the final leading edge cannot be fitted
  friend bool operator==(const FrontTrack&, const FrontTrack&) = default;
};

/// Least-squares line through (t, x) using the samples with t >= t_from.
SpeedFit fit_speed(std::span<const double> times, std::span<const double> positions, double t_from);

/// Positions at every snapshot and a speed fitted over the second half of
/// the run. Throws NumericError if some snapshot has no crossing.
FrontTrack track_front(const Simulation& sim, double level, const FitWindow& edge_window = {});

/// Decay rate of |u| to the right of `position`, with the same fit as the
/// travelling-wave steepness.
double leading_edge_decay(const Grid& x, std::size_t d, std::span<const double> u, double position,
                          const FitWindow& window = {});

/// Snapshot sampled as a Profile, shifted so that x = position maps to 0.
Profile recentered(const Grid& x, std::size_t d, std::span<const double> u, double position);

}  // namespace frontlab
