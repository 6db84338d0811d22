#pragma once

#include <cstddef>
#include <vector>

#include "frontlab/errors.hpp"
#include "frontlab/potential.hpp"
#include "frontlab/profile.hpp"
#include "frontlab/tail_fit.hpp"

namespace frontlab {

/// No bounded front leaves the origin along the requested direction at this speed.
class NoFrontError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Point of the first-order system phi' = varphi, varphi' = -c varphi + grad V(phi).
struct TWState {
  std::vector<double> phi;
  std::vector<double> varphi;
  friend bool operator==(const TWState&, const TWState&) = default;
};

/// One classical RK4 step of size h (h < 0 integrates toward decreasing xi).
/// Throws NumericError if the result is not finite.
TWState rk4_step(const Potential& v, double c, const TWState& s, double h);

enum class DecayBranch { Steep, Shallow };

struct ShootOptions {
  std::size_t direction = 0;  // eigenvector index of D^2V(0), ascending order
  DecayBranch branch = DecayBranch::Steep;
  double amplitude = 1e-6;
  double step = 1e-3;  // magnitude of the integration step
  double span = 200.0;
  double macro_radius = 5.0;
  double rest_tol = 1e-8;  // |varphi| and |grad V| below this count as arrival at rest
};

enum class ShotOutcome {
  Overshoot,   // left the macro ball
  Undershoot,  // turned back toward the origin
  Connected,   // came to rest at another critical point
  Undecided,   // span exhausted
};

/// Trajectory in decreasing xi from xi = 0; xi[k] = -k * step.
struct Shot {
  double c = 0.0;
  double decay_rate = 0.0;  // lambda of the initial eigendirection
  std::vector<double> direction;
  ShotOutcome outcome = ShotOutcome::Undecided;
  std::vector<TWState> states;
};

/// Leaves the origin along a real stable eigendirection of the linearization
/// at speed c and integrates toward -infinity. Throws std::invalid_argument
/// for c <= 0 or amplitude 0 (the constant solution is not a front), and
/// NumericError when the selected decay rate is complex.
Shot shoot(const Potential& v, double c, const ShootOptions& opts = {});

/// Profile in standard orientation (phi -> 0 at the right end) of the shot at
/// speed c, cut at the closest approach to rest and extended to the right by
/// forward integration until |phi| < tail_floor. Throws NoFrontError when the
/// shot leaves the macro ball without coming close to rest (closest-approach
/// defect above `rest_gap`).
Profile shoot_front(const Potential& v, double c, const ShootOptions& opts = {},
                    double rest_gap = 1e-3, double tail_floor = 1e-12);

enum class FrontClass { Pushed, Pulled, Mild };

struct FrontRecord {
  double c = 0.0;
  Profile profile;
  double steepness = 0.0;
  FrontClass classification = FrontClass::Mild;
  double residual = 0.0;
  friend bool operator==(const FrontRecord&, const FrontRecord&) = default;
};

struct PushedSpeed {
  double c = 0.0;
  double c_low = 0.0;   // last speed that undershot
  double c_high = 0.0;  // last speed that overshot
  /// Evaluations include the refinement used for the front record, whose
  /// speed front.c is bisected to rounding level.
  std::size_t evaluations = 0;
  FrontRecord front;
};

/// Bisection on the shooting outcome: undershoot at c_lo, overshoot at
/// c_hi. Requires the shooting direction to span an invariant line of the
/// dynamics (always true for d = 1). Throws BracketError without a sign
/// change and ConfigError if the axis is not invariant.
PushedSpeed find_pushed_speed(const Potential& v, double c_lo, double c_hi, double tol,
                              const ShootOptions& opts = {});

/// Decay rate of |phi| at the right end of the profile.
double measure_steepness(const Profile& profile, const FitWindow& window = {});

/// Pushed iff lambda > c/2 + tol; Pulled iff |c - c_lin| <= tol and
/// |lambda - c_lin/2| <= tol; Mild otherwise.
FrontClass classify_front(double c, double lambda, double c_lin, double tol);

/// Default classification tolerance, 0.02 c_lin.
double default_class_tol(double c_lin);

/// max over interior nodes of |phi'' + c phi' - grad V(phi)| (centered stencils).
double residual(const Potential& v, double c, const Profile& profile);

/// Closed-form front 1/(1 + e^{k xi}), k = sqrt(b/2), of the cubic family,
/// travelling at k + 1/k.
Profile cubic_exact_front(double b, const Grid& grid);
double cubic_exact_speed(double b);

const char* to_string(ShotOutcome o);
const char* to_string(FrontClass f);

}  // namespace frontlab
