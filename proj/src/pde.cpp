#include "frontlab/pde.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "frontlab/errors.hpp"
#include "frontlab/kernels.hpp"
#include "frontlab/spectral.hpp"

namespace frontlab {

namespace {

std::vector<double> resolve_axis(const Potential& v, const std::vector<double>& axis) {
  if (axis.empty()) return analyze(v).eigenvectors.column(0);
  if (axis.size() != v.dim()) throw DimensionError("simulate: initial axis has the wrong dimension");
  return axis;
}

std::vector<double> initial_values(const SimConfig& cfg, const Grid& x) {
  const std::size_t d = cfg.potential.dim();
  const std::size_t n = x.n();
  std::vector<double> u(n * d, 0.0);
  std::visit(
      [&](const auto& init) {
        using T = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<T, StepInit>) {
          if (!(init.width > 0.0)) throw ConfigError("simulate: step width must be positive");
          const std::vector<double> e = resolve_axis(cfg.potential, init.axis);
          for (std::size_t i = 0; i < n; ++i)
            if (x.at(i) <= x.xi_min() + init.width)
              for (std::size_t j = 0; j < d; ++j) u[i * d + j] = init.level * e[j];
        } else if constexpr (std::is_same_v<T, GaussianInit>) {
          if (!(init.sigma > 0.0)) throw ConfigError("simulate: gaussian sigma must be positive");
          const std::vector<double> e = resolve_axis(cfg.potential, init.axis);
          for (std::size_t i = 0; i < n; ++i) {
            const double z = (x.at(i) - x.xi_min()) / init.sigma;
            const double g = init.amp * std::exp(-0.5 * z * z);
            for (std::size_t j = 0; j < d; ++j) u[i * d + j] = g * e[j];
          }
        } else {
          if (init.values.size() != n * d)
            throw DimensionError("simulate: custom initial data must have nx * d values");
          u = init.values;
        }
      },
      cfg.initial);
  return u;
}

double norm_at(std::span<const double> u, std::size_t i, std::size_t d) {
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) s += u[i * d + j] * u[i * d + j];
  return std::sqrt(s);
}

}  // namespace

std::size_t node_count(double half_width, double dx) {
  if (!(half_width > 0.0) || !(dx > 0.0)) throw ConfigError("simulate: L and dx must be positive");
  return static_cast<std::size_t>(std::llround(2.0 * half_width / dx)) + 1;
}

Simulation simulate(const SimConfig& cfg) {
  const std::size_t n = node_count(cfg.half_width, cfg.dx);
  const Grid x(-cfg.half_width, cfg.half_width, n);
  const double dx = x.h();
  if (!(cfg.dt > 0.0) || cfg.dt > 0.4 * dx * dx) {
    std::ostringstream os;
    os << "simulate: dt = " << cfg.dt << " violates the diffusion limit 0.4 dx^2 = " << 0.4 * dx * dx;
    throw ConfigError(os.str());
  }
  if (!(cfg.t_end >= 0.0) || !(cfg.snapshot_every > 0.0))
    throw ConfigError("simulate: T must be non-negative and the snapshot cadence positive");

  const std::size_t d = cfg.potential.dim();
  const std::size_t size = n * d;
  std::vector<double> u = initial_values(cfg, x);
  std::vector<double> k1(size), k2(size), k3(size), k4(size), tmp(size);
  const double inv_dx2 = 1.0 / (dx * dx);
  const double dt = cfg.dt;

  Simulation sim{x, d, dt, 0, {}, false};
  const auto total = static_cast<std::size_t>(std::llround(cfg.t_end / dt));
  const auto cadence = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.snapshot_every / dt)));
  const double guard = x.xi_max() - 10.0 * dx;

  auto record = [&](std::size_t step) {
    sim.snapshots.push_back({static_cast<double>(step) * dt, u});
    const auto pos = front_position(x, d, u, cfg.watch_level);
    if (pos && *pos > guard) sim.contaminated = true;
  };
  record(0);

  for (std::size_t step = 1; step <= total; ++step) {
    kernels::mol_rhs_parallel(cfg.potential, u, inv_dx2, k1);
    for (std::size_t k = 0; k < size; ++k) tmp[k] = u[k] + 0.5 * dt * k1[k];
    kernels::mol_rhs_parallel(cfg.potential, tmp, inv_dx2, k2);
    for (std::size_t k = 0; k < size; ++k) tmp[k] = u[k] + 0.5 * dt * k2[k];
    kernels::mol_rhs_parallel(cfg.potential, tmp, inv_dx2, k3);
    for (std::size_t k = 0; k < size; ++k) tmp[k] = u[k] + dt * k3[k];
    kernels::mol_rhs_parallel(cfg.potential, tmp, inv_dx2, k4);
    bool finite = true;
    for (std::size_t k = 0; k < size; ++k) {
      u[k] += dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
      finite = finite && std::isfinite(u[k]);
    }
    if (!finite) {
      std::ostringstream os;
      os << "simulate: state is no longer finite at t = " << static_cast<double>(step) * dt;
      throw NumericError(os.str());
    }
    sim.steps = step;
    if (step % cadence == 0 || step == total) record(step);
  }
  return sim;
}

std::optional<double> front_position(const Grid& x, std::size_t d, std::span<const double> u,
                                     double level) {
  const std::size_t n = x.n();
  if (u.size() != n * d) throw DimensionError("front_position: state size does not match the grid");
  for (std::size_t i = n - 1; i > 0; --i) {
    const double right = norm_at(u, i, d);
    const double left = norm_at(u, i - 1, d);
    if (right < level && left >= level) {
      const double s = (left - level) / (left - right);
      return x.at(i - 1) + s * x.h();
    }
  }
  return std::nullopt;
}

SpeedFit fit_speed(std::span<const double> times, std::span<const double> positions, double t_from) {
  if (times.size() != positions.size()) throw DimensionError("fit_speed: length mismatch");
  double st = 0.0, sx = 0.0;
  std::size_t m = 0;
  for (std::size_t k = 0; k < times.size(); ++k)
    if (times[k] >= t_from) {
      st += times[k];
      sx += positions[k];
      ++m;
    }
  if (m < 2) throw NumericError("fit_speed: fewer than two samples in the fit window");
  const double mt = st / static_cast<double>(m);
  const double mx = sx / static_cast<double>(m);
  double stt = 0.0, stx = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k)
    if (times[k] >= t_from) {
      stt += (times[k] - mt) * (times[k] - mt);
      stx += (times[k] - mt) * (positions[k] - mx);
    }
  SpeedFit fit;
  fit.slope = stx / stt;
  fit.intercept = mx - fit.slope * mt;
  double ss = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k)
    if (times[k] >= t_from) {
      const double r = positions[k] - (fit.intercept + fit.slope * times[k]);
      ss += r * r;
    }
  fit.residual = std::sqrt(ss / static_cast<double>(m));
  fit.samples = m;
  return fit;
}

FrontTrack track_front(const Simulation& sim, double level, const FitWindow& edge_window) {
  if (!(level > 0.0)) throw ConfigError("track_front: level must be positive");
  if (sim.snapshots.empty()) throw NumericError("track_front: no snapshots");
  FrontTrack track;
  for (const Snapshot& s : sim.snapshots) {
    const auto pos = front_position(sim.x, sim.d, s.u, level);
    if (!pos) {
      std::ostringstream os;
      os << "track_front: no crossing of level " << level << " at t = " << s.t;
      throw NumericError(os.str());
    }
    track.times.push_back(s.t);
    track.positions.push_back(*pos);
  }
  const double t_last = track.times.back();
  track.speed_fit = fit_speed(track.times, track.positions, 0.5 * t_last);
  try {
    track.edge_lambda =
        leading_edge_decay(sim.x, sim.d, sim.snapshots.back().u, track.positions.back(), edge_window);
  } catch (const NumericError&) {
    track.edge_lambda = std::numeric_limits<double>::quiet_NaN();
  }
  return track;
}

double leading_edge_decay(const Grid& x, std::size_t d, std::span<const double> u, double position,
                          const FitWindow& window) {
  if (u.size() != x.n() * d) throw DimensionError("leading_edge_decay: state size does not match the grid");
  std::vector<double> xs, amp;
  for (std::size_t i = 0; i < x.n(); ++i)
    if (x.at(i) > position) {
      xs.push_back(x.at(i));
      amp.push_back(norm_at(u, i, d));
    }
  return fit_exponential_tail(xs, amp, window).lambda;
}

Profile recentered(const Grid& x, std::size_t d, std::span<const double> u, double position) {
  if (u.size() != x.n() * d) throw DimensionError("recentered: state size does not match the grid");
  return Profile(Grid(x.xi_min() - position, x.xi_max() - position, x.n()), d,
                 std::vector<double>(u.begin(), u.end()));
}

}  // namespace frontlab
