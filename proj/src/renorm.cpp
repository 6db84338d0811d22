#include "frontlab/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "frontlab/errors.hpp"
#include "frontlab/linalg.hpp"

namespace frontlab {

LimitPotential::LimitPotential(std::vector<double> mu, double nu) : mu_(std::move(mu)), nu_(nu) {
  if (mu_.empty()) throw DimensionError("LimitPotential: mu must be nonempty");
  if (!std::is_sorted(mu_.begin(), mu_.end())) throw ConfigError("LimitPotential: mu must be ascending");
  if (!(mu_.front() < 0.0)) throw ConfigError("LimitPotential: requires mu_1 < 0");
  if (!(nu_ >= 0.0)) throw ConfigError("LimitPotential: nu must be non-negative");
  c_lin_ = linear_speed(mu_.front());
  for (double m : mu_)
    weights_.push_back(0.5 * c_lin_ + std::sqrt(std::max(0.0, 0.25 * c_lin_ * c_lin_ + m + nu_)));
}

double LimitPotential::norm(std::span<const double> u) const {
  if (u.size() != dim()) throw DimensionError("LimitPotential: dimension mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) s += weights_[j] * u[j] * u[j];
  return std::sqrt(s / weights_.front());
}

std::vector<double> LimitPotential::metric_apply(std::span<const double> u) const {
  std::vector<double> g(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) g[j] = weights_[j] / weights_.front() * u[j];
  return g;
}

double LimitPotential::value(std::span<const double> u) const {
  double q = 0.0, sq = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    q += mu_[j] * u[j] * u[j];
    sq += u[j] * u[j];
  }
  return 0.5 * (q + (inside(u) ? nu_ * sq : 0.0));
}

void LimitPotential::gradient(std::span<const double> u, bool in, std::span<double> out) const {
  for (std::size_t j = 0; j < u.size(); ++j) out[j] = (mu_[j] + (in ? nu_ : 0.0)) * u[j];
}

TWState unstable_manifold_ic(const std::vector<double>& mu, double nu, double c_lin,
                             std::span<const double> a, double amplitude) {
  if (a.size() != mu.size()) throw DimensionError("unstable_manifold_ic: coefficient dimension mismatch");
  if (std::abs(norm2(a) - 1.0) > 1e-12) throw std::invalid_argument("unstable_manifold_ic: |a| must be 1");
  const PerturbedSpectrum ps = perturbed_eigenvalues(c_lin, mu, nu);
  TWState s{std::vector<double>(mu.size()), std::vector<double>(mu.size())};
  for (std::size_t j = 0; j < mu.size(); ++j) {
    s.phi[j] = amplitude * a[j];
    s.varphi[j] = amplitude * a[j] * ps.pairs[j].plus;
  }
  return s;
}

namespace {

BarrierCrossing jump(const LimitPotential& lp, const TWState& contact, bool outward, double zeta,
                     bool force_reflect) {
  const std::size_t d = lp.dim();
  std::vector<double> normal = lp.metric_apply(contact.phi);
  const double len = norm2(normal);
  for (double& x : normal) x /= len;
  const double vn = dot(contact.varphi, normal);
  const double psi2 = dot(contact.phi, contact.phi);
  const double balance = vn * vn - (outward ? 1.0 : -1.0) * lp.nu() * psi2;

  BarrierCrossing bc;
  bc.zeta_cross = zeta;
  bc.state_minus = contact;
  bc.state_plus = contact;
  bc.outward = outward;
  double vn_plus;
  if (force_reflect || balance < 0.0) {
    bc.kind = CrossingKind::Reflect;
    vn_plus = -vn;
  } else {
    bc.kind = CrossingKind::Transmit;
    vn_plus = std::copysign(std::sqrt(balance), vn);
  }
  for (std::size_t j = 0; j < d; ++j) bc.state_plus.varphi[j] += (vn_plus - vn) * normal[j];
  bc.gamma = vn == 0.0 ? 1.0 : std::abs(vn_plus) / std::abs(vn);
  return bc;
}

TWState step(const LimitPotential& lp, double c, const TWState& s, double h, bool in) {
  const std::size_t d = lp.dim();
  auto rhs = [&](const TWState& x, TWState& out) {
    out.phi = x.varphi;
    out.varphi.resize(d);
    lp.gradient(x.phi, in, out.varphi);
    for (std::size_t j = 0; j < d; ++j) out.varphi[j] += c * x.varphi[j];
  };
  auto shifted = [&](const TWState& k, double a) {
    TWState r = s;
    for (std::size_t j = 0; j < d; ++j) {
      r.phi[j] += a * k.phi[j];
      r.varphi[j] += a * k.varphi[j];
    }
    return r;
  };
  TWState k1, k2, k3, k4;
  rhs(s, k1);
  rhs(shifted(k1, 0.5 * h), k2);
  rhs(shifted(k2, 0.5 * h), k3);
  rhs(shifted(k3, h), k4);
  TWState r = s;
  for (std::size_t j = 0; j < d; ++j) {
    r.phi[j] += h / 6.0 * (k1.phi[j] + 2.0 * k2.phi[j] + 2.0 * k3.phi[j] + k4.phi[j]);
    r.varphi[j] += h / 6.0 * (k1.varphi[j] + 2.0 * k2.varphi[j] + 2.0 * k3.varphi[j] + k4.varphi[j]);
    if (!std::isfinite(r.phi[j]) || !std::isfinite(r.varphi[j]))
      throw NumericError("integrate_with_barrier: state is no longer finite");
  }
  return r;
}

}  // namespace

BarrierCrossing barrier_jump(const LimitPotential& lp, const TWState& contact, bool outward,
                             double zeta) {
  if (contact.phi.size() != lp.dim() || contact.varphi.size() != lp.dim())
    throw DimensionError("barrier_jump: state dimension mismatch");
  return jump(lp, contact, outward, zeta, false);
}

BarrierTrajectory integrate_with_barrier(const LimitPotential& lp, double c_lin, const TWState& ic,
                                         double span, double h, const BarrierOptions& opts) {
  if (ic.phi.size() != lp.dim() || ic.varphi.size() != lp.dim())
    throw DimensionError("integrate_with_barrier: state dimension mismatch");
  if (!(h > 0.0) || !(span > 0.0)) throw std::invalid_argument("integrate_with_barrier: h and span must be positive");
  if (std::abs(lp.norm(ic.phi) - 1.0) < 1e-14)
    throw std::invalid_argument("integrate_with_barrier: initial state lies on the ellipsoid");

  BarrierTrajectory traj;
  traj.norm_weights = lp.weights();
  bool in = lp.inside(ic.phi);
  TWState s = ic;
  double zeta = 0.0;
  auto record = [&] {
    traj.zeta.push_back(zeta);
    traj.states.push_back(s);
    traj.inside.push_back(in);
  };
  record();
  auto crossed = [&](const TWState& x) { return in ? lp.norm(x.phi) >= 1.0 : lp.norm(x.phi) < 1.0; };

  while (zeta < span) {
    const double hs = std::min(h, span - zeta);
    TWState next = step(lp, c_lin, s, hs, in);
    if (!crossed(next)) {
      s = std::move(next);
      zeta += hs;
      record();
      if (norm2(s.phi) > opts.max_norm) break;
      continue;
    }
    double lo = 0.0, hi = hs;
    while (hi - lo > opts.event_tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (crossed(step(lp, c_lin, s, mid, in))) hi = mid;
      else lo = mid;
    }
    const TWState past = step(lp, c_lin, s, hi, in);
    BarrierCrossing bc = jump(lp, past, in, zeta + hi, false);
    if (bc.kind == CrossingKind::Reflect) {
      // Stay on the incoming side of the ellipsoid.
      bc = jump(lp, lo > 0.0 ? step(lp, c_lin, s, lo, in) : s, in, zeta + lo, true);
      zeta += lo;
    } else {
      zeta += hi;
      in = !in;
    }
    s = bc.state_plus;
    traj.crossings.push_back(std::move(bc));
    if (traj.crossings.size() > opts.max_crossings) {
      std::ostringstream os;
      os << "integrate_with_barrier: more than " << opts.max_crossings << " barrier events by zeta = " << zeta;
      throw NumericError(os.str());
    }
    record();
  }
  return traj;
}

bool LemmaReport::all_passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const LemmaCheck& c) { return c.passed; });
}

LemmaReport verify_lemma32(const BarrierTrajectory& traj, const std::vector<double>& mu, double c_lin,
                           double horizon) {
  LemmaReport rep;
  const double inf = std::numeric_limits<double>::infinity();
  LemmaCheck norm_check{"norm_above_one", false, -inf};
  LemmaCheck growth{"growth", false, -inf};
  LemmaCheck ratio{"ratio_limit", false, -inf};
  LemmaCheck post{"post_crossing_ratio", false, -inf};
  auto finish = [&] {
    rep.checks = {norm_check, growth, ratio, post};
    return rep;
  };
  if (traj.crossings.empty() || !traj.crossings.front().outward ||
      traj.crossings.front().kind != CrossingKind::Transmit)
    return finish();
  if (mu.size() != traj.norm_weights.size()) throw DimensionError("verify_lemma32: mu dimension mismatch");

  const std::size_t d = mu.size();
  const BarrierCrossing& first = traj.crossings.front();
  const double z0 = first.zeta_cross;
  rep.zeta_cross = z0;
  const TWState& s0 = first.state_plus;
  const double w1 = traj.norm_weights.front();
  auto ell = [&](const std::vector<double>& u) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += traj.norm_weights[j] * u[j] * u[j];
    return std::sqrt(s / w1);
  };

  // (a) and (b) over the samples strictly after the crossing.
  double min_norm = inf;
  double min_increment = inf;
  double prev = norm2(s0.phi);
  std::size_t last = 0;
  bool any = false;
  for (std::size_t k = 0; k < traj.zeta.size(); ++k) {
    const double t = traj.zeta[k] - z0;
    if (t <= 0.0 || t > horizon) continue;
    any = true;
    min_norm = std::min(min_norm, ell(traj.states[k].phi));
    const double r = norm2(traj.states[k].phi);
    min_increment = std::min(min_increment, r - prev);
    prev = r;
    last = k;
  }
  if (!any) return finish();
  norm_check.margin = min_norm - 1.0;
  norm_check.passed = norm_check.margin > 0.0;

  const double step = traj.zeta.size() > 1 ? traj.zeta[1] - traj.zeta[0] : 0.0;
  const bool reached = traj.zeta[last] - z0 >= horizon - 2.0 * step;
  const double final_size = norm2(traj.states[last].phi);
  growth.margin = min_increment > 0.0 ? final_size - 10.0 : min_increment;
  growth.passed = reached && growth.margin > 0.0;

  // (c) and (d) per component active at the crossing.
  const double scale = norm2(s0.phi);
  double worst_limit = inf;
  double worst_post = inf;
  bool active = false;
  for (std::size_t j = 0; j < d; ++j) {
    if (std::abs(s0.phi[j]) <= 1e-12 * scale) continue;
    active = true;
    const double lam = 0.5 * c_lin + std::sqrt(std::max(0.0, 0.25 * c_lin * c_lin + mu[j]));
    const TWState& sh = traj.states[last];
    worst_limit = std::min(worst_limit, 1e-2 - std::abs(sh.varphi[j] / sh.phi[j] - lam));
    worst_post = std::min(worst_post, s0.varphi[j] / s0.phi[j] - 0.5 * c_lin);
  }
  if (active) {
    ratio.margin = worst_limit;
    ratio.passed = reached && worst_limit > 0.0;
    post.margin = worst_post;
    post.passed = worst_post > 0.0;
  }
  return finish();
}

double renormalized_potential(const Potential& w, double eps, std::span<const double> u) {
  if (!(eps > 0.0)) throw std::invalid_argument("renormalized_potential: eps must be positive");
  std::vector<double> x(u.begin(), u.end());
  for (double& xi : x) xi *= eps;
  return w.value(x) / (eps * eps);
}

RenormSequence perturbation_sequence_study(const Potential& base, double nu, int n_max,
                                           const StudyOptions& opts) {
  if (n_max < 0) throw ConfigError("perturbation_sequence_study: n_max must be non-negative");
  if (!(opts.eps0 > 0.0)) throw ConfigError("perturbation_sequence_study: eps0 must be positive");
  const SpectralReport spec = analyze(base);
  if (!(spec.mu.front() < 0.0))
    throw ConfigError("perturbation_sequence_study: base potential needs mu_1 < 0");
  if (nu_admissible(spec.c_lin, spec.mu, nu) == NuStatus::FailsFirst)
    throw AdmissibilityError("perturbation_sequence_study: requires mu_1 + nu > 0");

  RenormSequence seq;
  seq.nu = nu;
  seq.c_lin = spec.c_lin;
  const double c_hi = opts.upper_factor * spec.c_lin;
  double start = opts.lower_start * spec.c_lin;
  for (int n = 0; n <= n_max; ++n) {
    const double eps = opts.eps0 * std::ldexp(1.0, -n);
    const double delta = eps * eps;
    const Potential w = build_perturbed(base, eps, delta, nu);
    ClassifyOptions co = opts.classify;
    co.c_high = c_hi;

    double c_lo = start;
    bool found = false;
    for (int k = 0; k <= opts.lower_halvings; ++k) {
      if (classify_speed(w, c_lo, co).probe.evidence == SpeedEvidence::MinusInfinity) {
        found = true;
        break;
      }
      c_lo *= 0.5;
    }
    if (!found) {
      std::ostringstream os;
      os << "perturbation_sequence_study: no negative-energy evidence down to c = " << c_lo * 2.0
         << " at n = " << n;
      throw BracketError(os.str());
    }
    SpeedEstimate est = estimate_c_nonlin(w, c_lo, c_hi, opts.tol, co);
    start = est.c_low;
    seq.rows.push_back({n, eps, delta, std::move(est)});
  }
  return seq;
}

const char* to_string(CrossingKind k) { return k == CrossingKind::Transmit ? "transmit" : "reflect"; }

}  // namespace frontlab
