#include "frontlab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "frontlab/errors.hpp"
#include "frontlab/kernels.hpp"
#include "frontlab/spectral.hpp"

namespace frontlab {

Grid default_energy_grid() { return Grid(-40.0, 120.0, 4001); }

namespace {

void require_positive_speed(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("energy: c must be positive");
}

void check_resolution(const Grid& g, double c) {
  if (c * g.h() > 0.2) {
    std::ostringstream os;
    os << "grid does not resolve exp(c xi): c*h = " << c * g.h() << " > 0.2";
    warn(os.str());
  }
}

// Thomas solve of (M (1 + tau C) + tau K) x = rhs for component j on the m
// free nodes, where C holds the clamped diagonal curvature of V. The
// curvature term keeps the step stable where the weight, and so the energy's
// sensitivity, is negligible. The node after m-1 is pinned at zero.
void solve_step(const kernels::EnergyWeights& wts, std::span<const double> curv, double tau,
                std::size_t m, std::size_t d, std::size_t j, std::span<const double> rhs,
                std::span<double> x, std::vector<double>& cp, std::vector<double>& dp) {
  cp.resize(m);
  dp.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double sub = i > 0 ? -tau * wts.kinetic[i - 1] : 0.0;
    const double sup = i + 1 < m ? -tau * wts.kinetic[i] : 0.0;
    const double diag = wts.mass[i] * (1.0 + tau * curv[i * d + j]) + tau * ((i > 0 ? wts.kinetic[i - 1] : 0.0) + wts.kinetic[i]);
    const double den = i > 0 ? diag - sub * cp[i - 1] : diag;
    cp[i] = sup / den;
    dp[i] = (rhs[i * d + j] - (i > 0 ? sub * dp[i - 1] : 0.0)) / den;
  }
  x[(m - 1) * d + j] = dp[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) x[i * d + j] = dp[i] - cp[i] * x[(i + 1) * d + j];
}

double axis_minimizer_amplitude(const Potential& v, std::span<const double> axis) {
  double best_t = 1.0;
  double best_v = 0.0;
  std::vector<double> u(axis.size());
  for (int k = 1; k <= 2000; ++k) {
    const double t = 0.005 * k;
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = t * axis[j];
    const double val = v.value(u);
    if (val < best_v) {
      best_v = val;
      best_t = t;
    }
  }
  return best_t;
}

Profile tanh_seed(const Grid& grid, std::span<const double> axis, double amplitude, double rate) {
  Profile p(grid, axis.size());
  for (std::size_t i = 0; i < grid.n(); ++i) {
    const double s = 0.5 * (1.0 - std::tanh(0.5 * rate * grid.at(i)));
    for (std::size_t j = 0; j < axis.size(); ++j) p.at(i)[j] = amplitude * s * axis[j];
  }
  return p;
}

void diagonal_curvature(const Potential& v, std::span<const double> w, std::size_t m,
                        std::span<double> curv) {
  const std::size_t d = v.dim();
  for (std::size_t i = 0; i < m; ++i) {
    const Matrix hess = v.hessian(w.subspan(i * d, d));
    for (std::size_t j = 0; j < d; ++j) curv[i * d + j] = std::max(0.0, hess(j, j));
  }
}

}  // namespace

double weighted_energy(const Profile& w, double c, const Potential& v) {
  require_positive_speed(c);
  if (w.dim() != v.dim()) throw DimensionError("profile and potential dimensions differ");
  check_resolution(w.grid(), c);
  const kernels::EnergyWeights wts = kernels::energy_weights(w.grid(), c);
  kernels::Scratch scratch;
  return kernels::energy_parallel(v, wts, w.values(), scratch);
}

std::vector<double> weighted_energy_gradient(const Profile& w, double c, const Potential& v) {
  require_positive_speed(c);
  if (w.dim() != v.dim()) throw DimensionError("profile and potential dimensions differ");
  const kernels::EnergyWeights wts = kernels::energy_weights(w.grid(), c);
  kernels::Scratch scratch;
  std::vector<double> g(w.values().size());
  kernels::energy_gradient_parallel(v, wts, w.values(), g, scratch);
  return g;
}

Profile proof_test_function(double c_tilde, const Grid& grid, std::span<const double> axis) {
  if (!(c_tilde > 0.0)) throw std::invalid_argument("proof_test_function: c_tilde must be positive");
  Profile p(grid, axis.size());
  for (std::size_t i = 0; i < grid.n(); ++i) {
    const double xi = grid.at(i);
    const double s = xi <= 0.0 ? 1.0 : std::exp(-0.5 * c_tilde * xi);
    for (std::size_t j = 0; j < axis.size(); ++j) p.at(i)[j] = s * axis[j];
  }
  return p;
}

Profile proof_test_function(double c_tilde, const Grid& grid, const Potential& v) {
  const std::vector<double> axis = analyze(v).eigenvectors.column(0);
  return proof_test_function(c_tilde, grid, axis);
}

DescentResult minimize_energy(const Potential& v, double c, const Profile& seed,
                              const DescentOptions& opts) {
  require_positive_speed(c);
  if (seed.dim() != v.dim()) throw DimensionError("seed and potential dimensions differ");
  const Grid& grid = seed.grid();
  check_resolution(grid, c);
  const std::size_t n = grid.n();
  const std::size_t d = v.dim();
  const std::size_t m = n - 1;  // free nodes; the right end stays at 0
  const StepRule& rule = opts.step_rule;

  const kernels::EnergyWeights wts = kernels::energy_weights(grid, c);
  kernels::Scratch scratch;

  DescentResult r{seed, 0.0, 0, DescentStop::MaxIterations, {}};
  std::span<double> w = r.profile.values();
  for (std::size_t j = 0; j < d; ++j) w[(n - 1) * d + j] = 0.0;

  std::vector<double> grad(n * d), step(n * d, 0.0), rhs(n * d, 0.0), trial(n * d);
  std::vector<double> curv(n * d, 0.0);
  std::vector<double> cp, dp;
  double e = kernels::energy_gradient_parallel(v, wts, w, grad, scratch);
  if (!std::isfinite(e)) throw NumericError("minimize_energy: seed energy is not finite");
  if (opts.record_trace) r.trace.push_back(e);
  double tau = rule.initial;
  diagonal_curvature(v, w, m, curv);

  while (true) {
    if (e < opts.hard_floor) {
      r.stop = DescentStop::UnboundedBelow;
      break;
    }
    if (opts.target && e < *opts.target) {
      r.stop = DescentStop::TargetReached;
      break;
    }
    if (r.iterations >= opts.max_iter) {
      r.stop = DescentStop::MaxIterations;
      break;
    }
    bool accepted = false;
    bool done = false;
    while (!accepted) {
      for (std::size_t k = 0; k < m * d; ++k) rhs[k] = -tau * grad[k];
      for (std::size_t j = 0; j < d; ++j) solve_step(wts, curv, tau, m, d, j, rhs, step, cp, dp);
      double gd = 0.0;
      for (std::size_t k = 0; k < m * d; ++k) gd += grad[k] * step[k];
      if (-gd / tau <= opts.stop_tol * (1.0 + std::abs(e))) {
        r.stop = DescentStop::Converged;
        done = true;
        break;
      }
      for (std::size_t k = 0; k < n * d; ++k) trial[k] = w[k] + step[k];
      const double e_new = kernels::energy_parallel(v, wts, trial, scratch);
      if (std::isfinite(e_new) && e_new <= e + rule.sufficient_decrease * gd) {
        std::copy(trial.begin(), trial.end(), w.begin());
        e = kernels::energy_gradient_parallel(v, wts, w, grad, scratch);
        diagonal_curvature(v, w, m, curv);
        tau = std::min(tau * rule.grow, rule.max);
        accepted = true;
      } else {
        tau *= rule.shrink;
        if (tau < rule.min) {
          r.stop = DescentStop::Stalled;
          done = true;
          break;
        }
      }
    }
    if (done) break;
    ++r.iterations;
    if (opts.record_trace) r.trace.push_back(e);
  }
  r.energy = e;
  return r;
}

DescentResult minimize_energy(const Potential& v, double c, const Grid& grid,
                              const DescentOptions& opts, std::optional<double> c_high) {
  require_positive_speed(c);
  const SpectralReport spec = analyze(v);
  const std::vector<double> axis = spec.eigenvectors.column(0);

  std::vector<Profile> seeds;
  const double c_tilde = c_high ? 0.5 * (c + *c_high) : 1.25 * c;
  seeds.push_back(proof_test_function(c_tilde, grid, axis));
  if (c < spec.c_lin) seeds.push_back(proof_test_function(0.5 * (c + spec.c_lin), grid, axis));
  seeds.push_back(tanh_seed(grid, axis, axis_minimizer_amplitude(v, axis), std::max(1.0, c)));

  const kernels::EnergyWeights wts = kernels::energy_weights(grid, c);
  kernels::Scratch scratch;
  std::size_t best = 0;
  double best_e = 0.0;
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    auto vals = seeds[k].values();
    for (std::size_t j = 0; j < v.dim(); ++j) vals[(grid.n() - 1) * v.dim() + j] = 0.0;
    const double e = kernels::energy_parallel(v, wts, vals, scratch);
    if (k == 0 || e < best_e) {
      best = k;
      best_e = e;
    }
  }
  return minimize_energy(v, c, seeds[best], opts);
}

ClassifiedSpeed classify_speed(const Potential& v, double c, const ClassifyOptions& opts) {
  DescentOptions descent = opts.descent;
  descent.target = opts.neg_threshold;
  DescentResult r = minimize_energy(v, c, opts.grid, descent, opts.c_high);
  SpeedProbe probe;
  probe.c = c;
  probe.energy = r.energy;
  probe.iterations = r.iterations;
  probe.stop = r.stop;
  probe.evidence = r.energy < opts.neg_threshold ? SpeedEvidence::MinusInfinity : SpeedEvidence::Zero;
  return {probe, std::move(r.profile)};
}

SpeedEstimate estimate_c_nonlin(const Potential& v, double c_lo, double c_hi, double tol,
                                const ClassifyOptions& opts) {
  if (!(c_lo > 0.0) || !(c_hi > c_lo)) throw BracketError("invalid bracket: need 0 < c_lo < c_hi");
  if (!(tol > 0.0)) throw std::invalid_argument("estimate_c_nonlin: tol must be positive");
  ClassifyOptions o = opts;
  o.c_high = c_hi;

  SpeedEstimate est;
  est.tol = tol;
  ClassifiedSpeed lo = classify_speed(v, c_lo, o);
  est.probes.push_back(lo.probe);
  if (lo.probe.evidence != SpeedEvidence::MinusInfinity)
    throw BracketError("invalid bracket: no negative-energy evidence at c_lo");
  ClassifiedSpeed hi = classify_speed(v, c_hi, o);
  est.probes.push_back(hi.probe);
  if (hi.probe.evidence != SpeedEvidence::Zero)
    throw BracketError("invalid bracket: negative-energy evidence at c_hi");

  Profile witness = std::move(lo.profile);
  double a = c_lo, b = c_hi;
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    ClassifiedSpeed probe = classify_speed(v, mid, o);
    est.probes.push_back(probe.probe);
    if (probe.probe.evidence == SpeedEvidence::MinusInfinity) {
      a = mid;
      witness = std::move(probe.profile);
    } else {
      b = mid;
    }
  }
  est.c_low = a;
  est.c_high = b;
  est.c_estimate = 0.5 * (a + b);
  est.witness = std::move(witness);
  est.evaluations = est.probes.size();
  return est;
}

double energy_gap_bound(double c, double c_tilde, double eps, double delta, double nu) {
  if (!(c > 0.0) || !(c_tilde > c)) throw std::invalid_argument("energy_gap_bound: need 0 < c < c_tilde");
  const double gap = c_tilde - c;
  return 0.5 * nu / gap * std::pow(eps + delta, 2.0 * gap / c_tilde);
}

const char* to_string(SpeedEvidence e) {
  return e == SpeedEvidence::MinusInfinity ? "minus-infinity" : "zero";
}

const char* to_string(DescentStop s) {
  switch (s) {
    case DescentStop::Converged: return "converged";
    case DescentStop::Stalled: return "stalled";
    case DescentStop::MaxIterations: return "max-iterations";
    case DescentStop::TargetReached: return "target-reached";
    case DescentStop::UnboundedBelow: return "unbounded-below";
  }
  return "unknown";
}

}  // namespace frontlab
