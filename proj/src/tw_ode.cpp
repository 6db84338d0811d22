#include "frontlab/tw_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "frontlab/linalg.hpp"
#include "frontlab/spectral.hpp"

namespace frontlab {

namespace {

void derivative(const Potential& v, double c, const TWState& s, TWState& out) {
  out.phi = s.varphi;
  out.varphi.resize(s.phi.size());
  v.gradient(s.phi, out.varphi);
  for (std::size_t j = 0; j < s.phi.size(); ++j) out.varphi[j] -= c * s.varphi[j];
}

TWState axpy(const TWState& s, double a, const TWState& k) {
  TWState r = s;
  for (std::size_t j = 0; j < s.phi.size(); ++j) {
    r.phi[j] += a * k.phi[j];
    r.varphi[j] += a * k.varphi[j];
  }
  return r;
}

double rest_defect(const Potential& v, const TWState& s) {
  const std::vector<double> g = v.gradient(s.phi);
  const double a = norm2(s.varphi);
  const double b = norm2(g);
  return std::sqrt(a * a + b * b);
}

bool axis_invariant(const Potential& v, const std::vector<double>& e) {
  std::vector<double> u(e.size());
  for (int k = -20; k <= 20; ++k) {
    const double t = 0.1 * k;
    for (std::size_t j = 0; j < e.size(); ++j) u[j] = t * e[j];
    std::vector<double> g = v.gradient(u);
    const double along = dot(g, e);
    for (std::size_t j = 0; j < e.size(); ++j) g[j] -= along * e[j];
    if (norm2(g) > 1e-10 * (1.0 + std::abs(along))) return false;
  }
  return true;
}

}  // namespace

TWState rk4_step(const Potential& v, double c, const TWState& s, double h) {
  if (h == 0.0) throw std::invalid_argument("rk4_step: h must be nonzero");
  TWState k1, k2, k3, k4;
  derivative(v, c, s, k1);
  derivative(v, c, axpy(s, 0.5 * h, k1), k2);
  derivative(v, c, axpy(s, 0.5 * h, k2), k3);
  derivative(v, c, axpy(s, h, k3), k4);
  TWState r = s;
  bool finite = true;
  for (std::size_t j = 0; j < s.phi.size(); ++j) {
    r.phi[j] += h / 6.0 * (k1.phi[j] + 2.0 * k2.phi[j] + 2.0 * k3.phi[j] + k4.phi[j]);
    r.varphi[j] += h / 6.0 * (k1.varphi[j] + 2.0 * k2.varphi[j] + 2.0 * k3.varphi[j] + k4.varphi[j]);
    finite = finite && std::isfinite(r.phi[j]) && std::isfinite(r.varphi[j]);
  }
  if (!finite) throw NumericError("rk4_step: state is no longer finite");
  return r;
}

Shot shoot(const Potential& v, double c, const ShootOptions& opts) {
  if (!(c > 0.0)) throw std::invalid_argument("shoot: c must be positive");
  if (opts.amplitude == 0.0)
    throw std::invalid_argument("shoot: amplitude 0 gives the constant solution, not a front");
  if (!(opts.step > 0.0) || !(opts.span > 0.0)) throw std::invalid_argument("shoot: step and span must be positive");
  const SpectralReport spec = analyze(v);
  if (opts.direction >= v.dim()) throw DimensionError("shoot: direction index out of range");

  const RootPair roots = tw_eigenvalues(c, spec.mu[opts.direction]);
  if (roots.complex) {
    std::ostringstream os;
    os << "shoot: decay rates along direction " << opts.direction << " are complex at c = " << c;
    throw NumericError(os.str());
  }
  // Stable roots of the linearization are -lambda; the steep one is the more negative.
  const double root = opts.branch == DecayBranch::Steep ? roots.first : roots.second;
  if (!(root < 0.0)) throw NumericError("shoot: selected eigendirection does not decay");

  Shot shot;
  shot.c = c;
  shot.decay_rate = -root;
  shot.direction = spec.eigenvectors.column(opts.direction);
  TWState s;
  s.phi.resize(v.dim());
  s.varphi.resize(v.dim());
  for (std::size_t j = 0; j < v.dim(); ++j) {
    s.phi[j] = opts.amplitude * shot.direction[j];
    s.varphi[j] = root * opts.amplitude * shot.direction[j];
  }
  shot.states.push_back(s);

  const auto steps = static_cast<std::size_t>(std::ceil(opts.span / opts.step));
  const double start_norm = std::abs(opts.amplitude);
  for (std::size_t k = 0; k < steps; ++k) {
    s = rk4_step(v, c, s, -opts.step);
    shot.states.push_back(s);
    const double r = norm2(s.phi);
    if (r > opts.macro_radius) {
      shot.outcome = ShotOutcome::Overshoot;
      return shot;
    }
    if (r > 10.0 * start_norm && norm2(s.varphi) < opts.rest_tol && rest_defect(v, s) < opts.rest_tol) {
      shot.outcome = ShotOutcome::Connected;
      return shot;
    }
    // Moving away from the origin as xi decreases means phi . varphi < 0.
    if (dot(s.phi, s.varphi) >= 0.0) {
      shot.outcome = ShotOutcome::Undershoot;
      return shot;
    }
  }
  shot.outcome = ShotOutcome::Undecided;
  return shot;
}

Profile shoot_front(const Potential& v, double c, const ShootOptions& opts, double rest_gap,
                    double tail_floor) {
  const Shot shot = shoot(v, c, opts);
  const std::size_t count = shot.states.size();

  // The transition is the first local maximum of |phi'|. A later global
  // maximum belongs to the blow-up of an overshooting shot.
  std::size_t peak = count - 1;
  double prev_speed = norm2(shot.states[0].varphi);
  for (std::size_t k = 1; k < count; ++k) {
    const double sp = norm2(shot.states[k].varphi);
    if (sp < prev_speed) {
      peak = k - 1;
      break;
    }
    prev_speed = sp;
  }
  std::size_t cut = count - 1;
  double best = rest_defect(v, shot.states[cut]);
  for (std::size_t k = peak; k < count; ++k) {
    const double def = rest_defect(v, shot.states[k]);
    if (def < best) {
      best = def;
      cut = k;
    }
  }
  if (best > rest_gap || cut <= peak) {
    std::ostringstream os;
    os << "no front at c = " << c << ": shot " << to_string(shot.outcome)
       << " with closest approach to rest " << best;
    throw NoFrontError(os.str());
  }

  std::vector<TWState> tail;
  TWState s = shot.states.front();
  const auto max_tail = static_cast<std::size_t>(std::ceil(opts.span / opts.step));
  while (norm2(s.phi) >= tail_floor && tail.size() < max_tail) {
    s = rk4_step(v, c, s, opts.step);
    tail.push_back(s);
  }

  const std::size_t d = v.dim();
  const std::size_t n = cut + 1 + tail.size();
  const double xi_min = -static_cast<double>(cut) * opts.step;
  const double xi_max = static_cast<double>(tail.size()) * opts.step;
  Profile p(Grid(xi_min, xi_max, n), d);
  for (std::size_t i = 0; i <= cut; ++i)
    std::copy(shot.states[cut - i].phi.begin(), shot.states[cut - i].phi.end(), p.at(i).begin());
  for (std::size_t i = 0; i < tail.size(); ++i)
    std::copy(tail[i].phi.begin(), tail[i].phi.end(), p.at(cut + 1 + i).begin());
  return p;
}

PushedSpeed find_pushed_speed(const Potential& v, double c_lo, double c_hi, double tol,
                              const ShootOptions& opts) {
  if (!(c_lo > 0.0) || !(c_hi > c_lo)) throw BracketError("invalid bracket: need 0 < c_lo < c_hi");
  if (!(tol > 0.0)) throw std::invalid_argument("find_pushed_speed: tol must be positive");
  const SpectralReport spec = analyze(v);
  if (opts.direction >= v.dim()) throw DimensionError("find_pushed_speed: direction index out of range");
  if (!axis_invariant(v, spec.eigenvectors.column(opts.direction)))
    throw ConfigError("find_pushed_speed: shooting axis is not invariant under the dynamics");

  std::size_t evaluations = 2;
  const ShotOutcome lo = shoot(v, c_lo, opts).outcome;
  const ShotOutcome hi = shoot(v, c_hi, opts).outcome;
  if (lo != ShotOutcome::Undershoot || hi != ShotOutcome::Overshoot) {
    std::ostringstream os;
    os << "no sign change in the shooting outcome on [" << c_lo << ", " << c_hi << "]: "
       << to_string(lo) << " / " << to_string(hi);
    throw BracketError(os.str());
  }
  double a = c_lo, b = c_hi;
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    const ShotOutcome o = shoot(v, mid, opts).outcome;
    ++evaluations;
    if (o == ShotOutcome::Connected) {
      a = b = mid;
      break;
    }
    if (o == ShotOutcome::Undershoot) {
      a = mid;
    } else if (o == ShotOutcome::Overshoot) {
      b = mid;
    } else {
      std::ostringstream os;
      os << "find_pushed_speed: undecided shot at c = " << mid << "; enlarge the span";
      throw NumericError(os.str());
    }
  }
  const double c = 0.5 * (a + b);

  // The closest approach to rest improves only like a fractional power of
  // the speed error, so the profile comes from a bracket refined to
  // rounding level rather than to the caller's tolerance.
  double ra = a, rb = b;
  while (rb - ra > 8.0 * std::numeric_limits<double>::epsilon() * rb) {
    const double mid = 0.5 * (ra + rb);
    if (mid <= ra || mid >= rb) break;
    const ShotOutcome o = shoot(v, mid, opts).outcome;
    ++evaluations;
    if (o == ShotOutcome::Undershoot) {
      ra = mid;
    } else if (o == ShotOutcome::Overshoot) {
      rb = mid;
    } else {
      ra = rb = mid;
    }
  }
  const double c_front = ra;
  Profile profile = shoot_front(v, c_front, opts);
  const double lambda = measure_steepness(profile);
  const double res = residual(v, c_front, profile);
  FrontRecord rec{c_front, std::move(profile), lambda,
                  classify_front(c_front, lambda, spec.c_lin, default_class_tol(spec.c_lin)), res};
  return PushedSpeed{c, a, b, evaluations, std::move(rec)};
}

double measure_steepness(const Profile& profile, const FitWindow& window) {
  std::vector<double> xi(profile.size()), amp(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    xi[i] = profile.grid().at(i);
    amp[i] = profile.norm_at(i);
  }
  return fit_exponential_tail(xi, amp, window).lambda;
}

FrontClass classify_front(double c, double lambda, double c_lin, double tol) {
  if (lambda > 0.5 * c + tol) return FrontClass::Pushed;
  if (std::abs(c - c_lin) <= tol && std::abs(lambda - 0.5 * c_lin) <= tol) return FrontClass::Pulled;
  return FrontClass::Mild;
}

double default_class_tol(double c_lin) { return 0.02 * c_lin; }

double residual(const Potential& v, double c, const Profile& profile) {
  const std::size_t d = profile.dim();
  const double h = profile.grid().h();
  std::vector<double> g(d);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < profile.size(); ++i) {
    const auto l = profile.at(i - 1), m = profile.at(i), r = profile.at(i + 1);
    v.gradient(m, g);
    for (std::size_t j = 0; j < d; ++j) {
      const double second = (r[j] - 2.0 * m[j] + l[j]) / (h * h);
      const double first = (r[j] - l[j]) / (2.0 * h);
      worst = std::max(worst, std::abs(second + c * first - g[j]));
    }
  }
  return worst;
}

double cubic_exact_speed(double b) {
  if (!(b > 0.0)) throw std::invalid_argument("cubic_exact_speed: b must be positive");
  const double k = std::sqrt(0.5 * b);
  return k + 1.0 / k;
}

Profile cubic_exact_front(double b, const Grid& grid) {
  if (!(b > 0.0)) throw std::invalid_argument("cubic_exact_front: b must be positive");
  const double k = std::sqrt(0.5 * b);
  Profile p(grid, 1);
  for (std::size_t i = 0; i < grid.n(); ++i) {
    const double z = k * grid.at(i);
    p.at(i)[0] = z > 0.0 ? std::exp(-z) / (1.0 + std::exp(-z)) : 1.0 / (1.0 + std::exp(z));
  }
  return p;
}

const char* to_string(ShotOutcome o) {
  switch (o) {
    case ShotOutcome::Overshoot: return "overshoot";
    case ShotOutcome::Undershoot: return "undershoot";
    case ShotOutcome::Connected: return "connected";
    case ShotOutcome::Undecided: return "undecided";
  }
  return "unknown";
}

const char* to_string(FrontClass f) {
  switch (f) {
    case FrontClass::Pushed: return "pushed";
    case FrontClass::Pulled: return "pulled";
    case FrontClass::Mild: return "mild";
  }
  return "unknown";
}

}  // namespace frontlab
