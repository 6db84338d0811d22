#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frontlab/energy.hpp"
#include "frontlab/potential.hpp"
#include "frontlab/spectral.hpp"
#include "frontlab/tw_ode.hpp"

namespace frontlab {

/// Piecewise-quadratic blow-up limit of the perturbed potentials, written in
/// the eigen-coordinates of D^2V(0):
///   inside  (||u|| < 1):  (nu |u|^2 + sum_j mu_j u_j^2) / 2
///   outside (||u|| >= 1): sum_j mu_j u_j^2 / 2
/// with ||u||^2 = sum_j w_j u_j^2 / w_1 and w_j = lambda^pert_{j,+}
/// (the square root is clamped at 0 when mu_j + nu < -c_lin^2 / 4).
class LimitPotential {
 public:
  /// mu ascending with mu_1 < 0 and nu >= 0 (ConfigError otherwise). nu = 0
  /// is allowed so that the barrier-free case can be integrated.
  LimitPotential(std::vector<double> mu, double nu);

  std::size_t dim() const { return mu_.size(); }
  const std::vector<double>& mu() const { return mu_; }
  double nu() const { return nu_; }
  double c_lin() const { return c_lin_; }
  const std::vector<double>& weights() const { return weights_; }

  double norm(std::span<const double> u) const;
  /// G u with G = diag(w_j / w_1); the outward normal of the level set is G u / |G u|.
  std::vector<double> metric_apply(std::span<const double> u) const;
  bool inside(std::span<const double> u) const { return norm(u) < 1.0; }

  double value(std::span<const double> u) const;
  /// Gradient of the quadratic piece of the given region.
  void gradient(std::span<const double> u, bool inside, std::span<double> out) const;

 private:
  std::vector<double> mu_;
  double nu_;
  double c_lin_;
  std::vector<double> weights_;
};

/// Small-amplitude state on the unstable subspace of the inside dynamics:
/// amplitude * sum_j a_j (e_j, lambda^pert_{j,+} e_j). Requires |a| = 1.
TWState unstable_manifold_ic(const std::vector<double>& mu, double nu, double c_lin,
                             std::span<const double> a, double amplitude);

enum class CrossingKind { Transmit, Reflect };

struct BarrierCrossing {
  double zeta_cross = 0.0;
  TWState state_minus;
  TWState state_plus;
  double gamma = 1.0;  // |v+_n| / |v-_n|
  CrossingKind kind = CrossingKind::Transmit;
  bool outward = true;  // inside -> outside
  friend bool operator==(const BarrierCrossing&, const BarrierCrossing&) = default;
};

/// Velocity jump at a contact point psi: tangential part kept, normal part
/// rescaled so that |v+|^2 / 2 = |v-|^2 / 2 - (outward ? 1 : -1) nu |psi|^2 / 2.
/// Reflects (normal part negated) when that balance is negative; an exact
/// zero balance transmits with zero normal velocity.
BarrierCrossing barrier_jump(const LimitPotential& lp, const TWState& contact, bool outward,
                             double zeta);

struct BarrierTrajectory {
  std::vector<double> norm_weights;  // weights of the ellipsoid norm used
  std::vector<double> zeta;
  std::vector<TWState> states;
  std::vector<bool> inside;
  std::vector<BarrierCrossing> crossings;
};

struct BarrierOptions {
  double event_tol = 1e-12;
  std::size_t max_crossings = 100;
  /// Growth cap on |psi|: integration stops early once it is exceeded.
  double max_norm = 1e250;
};

/// psi'' = c_lin psi' + grad W(psi) off the ellipsoid, RK4 with step h, event
/// location by bisection on the sub-step length, and the jump rule at each
/// contact. Throws NumericError after more than max_crossings events and
/// std::invalid_argument if the initial state lies on the ellipsoid.
BarrierTrajectory integrate_with_barrier(const LimitPotential& lp, double c_lin, const TWState& ic,
                                         double span, double h, const BarrierOptions& opts = {});

struct LemmaCheck {
  std::string name;
  bool passed = false;
  double margin = 0.0;  // positive when passed
};

struct LemmaReport {
  double zeta_cross = 0.0;
  std::vector<LemmaCheck> checks;  // norm, growth, ratio, post_crossing_ratio
  bool all_passed() const;
};

/// Checks, with zeta measured from the first crossing:
///  (a) ||psi|| > 1 on (0, horizon];
///  (b) |psi| increasing after the crossing and above 10 at the horizon;
///  (c) psi'_j / psi_j within 1e-2 of lambda_{j,+} at the horizon for each
///      component active at the crossing;
///  (d) psi'_j / psi_j > c_lin / 2 just after the crossing.
/// A trajectory without a crossing fails every check.
LemmaReport verify_lemma32(const BarrierTrajectory& traj, const std::vector<double>& mu, double c_lin,
                           double horizon);

/// W(eps u) / eps^2 for a perturbed potential built with perturbation size eps.
double renormalized_potential(const Potential& w, double eps, std::span<const double> u);

struct SequenceRow {
  int n = 0;
  double eps = 0.0;
  double delta = 0.0;
  SpeedEstimate speed;
  friend bool operator==(const SequenceRow&, const SequenceRow&) = default;
};

struct RenormSequence {
  double nu = 0.0;
  double c_lin = 0.0;
  std::vector<SequenceRow> rows;
  friend bool operator==(const RenormSequence&, const RenormSequence&) = default;
};

struct StudyOptions {
  double eps0 = 0.5;
  double tol = 1e-3;
  /// Upper bracket as a multiple of c_lin.
  double upper_factor = 1.1;
  /// The lower bracket starts at this multiple of c_lin and is halved until
  /// it carries negative-energy evidence, at most `lower_halvings` times.
  double lower_start = 0.5;
  int lower_halvings = 8;
  ClassifyOptions classify;
};

/// c_nonlin of W_{eps_n, delta_n} for eps_n = 2^-n eps0, delta_n = eps_n^2,
/// n = 0..n_max. Bracket failures propagate as BracketError.
RenormSequence perturbation_sequence_study(const Potential& base, double nu, int n_max,
                                           const StudyOptions& opts = {});

const char* to_string(CrossingKind k);

}  // namespace frontlab
