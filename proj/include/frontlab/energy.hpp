#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "frontlab/potential.hpp"
#include "frontlab/profile.hpp"

namespace frontlab {

/// Default truncation of the real line for energy probes: [-40, 120], 4001 nodes.
Grid default_energy_grid();

/// Discrete E_{c,V}[w] = int e^{c xi} (|w'|^2 / 2 + V(w)) dxi. Warns when
/// c * h > 0.2 (weight not resolved). Requires c > 0.
double weighted_energy(const Profile& w, double c, const Potential& v);

/// Gradient of the discrete energy with respect to every nodal value.
std::vector<double> weighted_energy_gradient(const Profile& w, double c, const Potential& v);

/// w(xi) = axis for xi <= 0 and exp(-c_tilde xi / 2) axis for xi >= 0.
Profile proof_test_function(double c_tilde, const Grid& grid, std::span<const double> axis);
/// Same, valued along the first eigenvector of D^2V(0).
Profile proof_test_function(double c_tilde, const Grid& grid, const Potential& v);

struct StepRule {
  double initial = 0.25;
  double max = 8.0;
  double min = 1e-14;
  double grow = 2.0;
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;  // Armijo constant
};

struct DescentOptions {
  std::size_t max_iter = 20000;
  StepRule step_rule;
  /// Stop once the preconditioned decrement falls below stop_tol * (1 + |E|).
  double stop_tol = 1e-12;
  double hard_floor = -1e12;
  std::optional<double> target;  // stop as soon as E < target
  bool record_trace = true;
};

enum class DescentStop { Converged, Stalled, MaxIterations, TargetReached, UnboundedBelow };

struct DescentResult {
  Profile profile;
  double energy = 0.0;
  std::size_t iterations = 0;
  DescentStop stop = DescentStop::MaxIterations;
  std::vector<double> trace;  // energy after every accepted step, starting with the seed
};

/// Gradient descent on the discrete functional with Armijo backtracking.
///
/// The search direction is the gradient taken in the discrete weighted H^1
/// metric: each step solves (M + tau K) dw = -tau g, where M is the lumped
/// weighted mass and K the weighted stiffness, so a step is a semi-implicit
/// time step of w_t = w'' + c w' - grad V(w) in the frame moving at c. The
/// right end is held at 0; the left end is free.
DescentResult minimize_energy(const Potential& v, double c, const Profile& seed,
                              const DescentOptions& opts = {});

/// Seeds with the proof test function and a tanh front and descends from the
/// seed of lower energy. `c_high`, when given, sets c_tilde = (c + c_high) / 2
/// for the first seed.
DescentResult minimize_energy(const Potential& v, double c, const Grid& grid,
                              const DescentOptions& opts = {},
                              std::optional<double> c_high = std::nullopt);

enum class SpeedEvidence { MinusInfinity, Zero };

struct ClassifyOptions {
  double neg_threshold = -1.0;
  Grid grid = default_energy_grid();
  DescentOptions descent;
  std::optional<double> c_high;
};

struct SpeedProbe {
  double c = 0.0;
  SpeedEvidence evidence = SpeedEvidence::Zero;
  double energy = 0.0;
  std::size_t iterations = 0;
  DescentStop stop = DescentStop::MaxIterations;
  friend bool operator==(const SpeedProbe&, const SpeedProbe&) = default;
};

struct ClassifiedSpeed {
  SpeedProbe probe;
  Profile profile;
};

/// Evidence label for I(c) = -infinity (energy certified below neg_threshold)
/// versus I(c) = 0. Both outcomes are evidence, not proof.
ClassifiedSpeed classify_speed(const Potential& v, double c, const ClassifyOptions& opts = {});

struct SpeedEstimate {
  double c_low = 0.0;
  double c_high = 0.0;
  double c_estimate = 0.0;
  double tol = 0.0;
  std::optional<Profile> witness;  // negative-energy profile at c_low
  std::size_t evaluations = 0;
  std::vector<SpeedProbe> probes;
  friend bool operator==(const SpeedEstimate&, const SpeedEstimate&) = default;
};

/// Bisection for c_nonlin. Throws BracketError unless c_lo carries
/// MinusInfinity evidence and c_hi carries Zero evidence.
SpeedEstimate estimate_c_nonlin(const Potential& v, double c_lo, double c_hi, double tol,
                                const ClassifyOptions& opts = {});

/// (nu / 2) (c_tilde - c)^{-1} (eps + delta)^{2 (c_tilde - c) / c_tilde}: upper
/// bound on E_{c,W}[w] - E_{c,V}[w] for the proof test function w.
double energy_gap_bound(double c, double c_tilde, double eps, double delta, double nu);

const char* to_string(SpeedEvidence e);
const char* to_string(DescentStop s);

}  // namespace frontlab
