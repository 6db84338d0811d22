#include "frontlab/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "frontlab/errors.hpp"
#include "frontlab/parallel.hpp"

namespace frontlab::kernels {

EnergyWeights energy_weights(const Grid& grid, double c) {
  const std::size_t n = grid.n();
  const double h = grid.h();
  const double extreme = c * std::max(std::abs(grid.xi_min()), std::abs(grid.xi_max()));
  if (extreme > 700.0)
    throw NumericError("energy weights overflow: c * |xi| exceeds 700 on this grid");
  EnergyWeights w;
  w.kinetic.resize(n - 1);
  w.mass.resize(n);
  for (std::size_t i = 0; i + 1 < n; ++i) w.kinetic[i] = std::exp(c * (grid.at(i) + 0.5 * h)) / h;
  for (std::size_t i = 0; i < n; ++i) {
    const double omega = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    w.mass[i] = h * omega * std::exp(c * grid.at(i));
  }
  return w;
}

namespace {

std::size_t node_count(const EnergyWeights& wts, std::span<const double> w, std::size_t d) {
  const std::size_t n = wts.mass.size();
  if (w.size() != n * d) throw DimensionError("profile size does not match the energy weights");
  return n;
}

double kinetic_term(std::span<const double> w, std::size_t i, std::size_t d, double k) {
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double diff = w[(i + 1) * d + j] - w[i * d + j];
    s += diff * diff;
  }
  return 0.5 * k * s;
}

}  // namespace

double energy_serial(const Potential& v, const EnergyWeights& wts, std::span<const double> w) {
  const std::size_t d = v.dim();
  const std::size_t n = node_count(wts, w, d);
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    e += wts.mass[i] * v.value(w.subspan(i * d, d));
    if (i + 1 < n) e += kinetic_term(w, i, d, wts.kinetic[i]);
  }
  return e;
}

double energy_parallel(const Potential& v, const EnergyWeights& wts, std::span<const double> w,
                       Scratch& scratch) {
  const std::size_t d = v.dim();
  const std::size_t n = node_count(wts, w, d);
  constexpr std::size_t B = parallel::kReductionBlock;
  const std::size_t blocks = (n + B - 1) / B;
  scratch.values.resize(n + blocks);
  double* vals = scratch.values.data();
  double* partial = vals + n;

#pragma omp parallel for schedule(static) if (n >= parallel::kParallelThreshold)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * B;
    const std::size_t hi = std::min(n, lo + B);
    v.values(w.subspan(lo * d, (hi - lo) * d), {vals + lo, hi - lo});
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      s += wts.mass[i] * vals[i];
      if (i + 1 < n) s += kinetic_term(w, i, d, wts.kinetic[i]);
    }
    partial[b] = s;
  }
  double e = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) e += partial[b];
  return e;
}

double energy_gradient_serial(const Potential& v, const EnergyWeights& wts,
                              std::span<const double> w, std::span<double> grad) {
  const std::size_t d = v.dim();
  const std::size_t n = node_count(wts, w, d);
  if (grad.size() != n * d) throw DimensionError("gradient buffer must be n x d");
  std::vector<double> gv(d);
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    e += wts.mass[i] * v.value(w.subspan(i * d, d));
    if (i + 1 < n) e += kinetic_term(w, i, d, wts.kinetic[i]);
    v.gradient(w.subspan(i * d, d), gv);
    for (std::size_t j = 0; j < d; ++j) {
      double g = wts.mass[i] * gv[j];
      if (i > 0) g += wts.kinetic[i - 1] * (w[i * d + j] - w[(i - 1) * d + j]);
      if (i + 1 < n) g -= wts.kinetic[i] * (w[(i + 1) * d + j] - w[i * d + j]);
      grad[i * d + j] = g;
    }
  }
  return e;
}

double energy_gradient_parallel(const Potential& v, const EnergyWeights& wts,
                                std::span<const double> w, std::span<double> grad,
                                Scratch& scratch) {
  const std::size_t d = v.dim();
  const std::size_t n = node_count(wts, w, d);
  if (grad.size() != n * d) throw DimensionError("gradient buffer must be n x d");
  constexpr std::size_t B = parallel::kReductionBlock;
  const std::size_t blocks = (n + B - 1) / B;
  scratch.values.resize(n + blocks);
  scratch.grads.resize(n * d);
  double* vals = scratch.values.data();
  double* partial = vals + n;
  double* gv = scratch.grads.data();

#pragma omp parallel for schedule(static) if (n >= parallel::kParallelThreshold)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * B;
    const std::size_t hi = std::min(n, lo + B);
    const auto states = w.subspan(lo * d, (hi - lo) * d);
    v.values(states, {vals + lo, hi - lo});
    v.gradients(states, {gv + lo * d, (hi - lo) * d});
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      s += wts.mass[i] * vals[i];
      if (i + 1 < n) s += kinetic_term(w, i, d, wts.kinetic[i]);
      for (std::size_t j = 0; j < d; ++j) {
        double g = wts.mass[i] * gv[i * d + j];
        if (i > 0) g += wts.kinetic[i - 1] * (w[i * d + j] - w[(i - 1) * d + j]);
        if (i + 1 < n) g -= wts.kinetic[i] * (w[(i + 1) * d + j] - w[i * d + j]);
        grad[i * d + j] = g;
      }
    }
    partial[b] = s;
  }
  double e = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) e += partial[b];
  return e;
}

namespace {

inline double laplacian(std::span<const double> u, std::size_t i, std::size_t j, std::size_t n,
                        std::size_t d) {
  const double c = u[i * d + j];
  const double l = i == 0 ? u[d + j] : u[(i - 1) * d + j];
  const double r = i + 1 == n ? u[(n - 2) * d + j] : u[(i + 1) * d + j];
  return l - 2.0 * c + r;
}

}  // namespace

void mol_rhs_serial(const Potential& v, std::span<const double> u, double inv_dx2,
                    std::span<double> du) {
  const std::size_t d = v.dim();
  if (u.size() % d != 0 || du.size() != u.size())
    throw DimensionError("mol_rhs: state arrays must be n x d");
  const std::size_t n = u.size() / d;
  if (n < 3) throw std::invalid_argument("mol_rhs: need at least three nodes");
  std::vector<double> g(d);
  for (std::size_t i = 0; i < n; ++i) {
    v.gradient(u.subspan(i * d, d), g);
    for (std::size_t j = 0; j < d; ++j) du[i * d + j] = laplacian(u, i, j, n, d) * inv_dx2 - g[j];
  }
}

void mol_rhs_parallel(const Potential& v, std::span<const double> u, double inv_dx2,
                      std::span<double> du) {
  const std::size_t d = v.dim();
  if (u.size() % d != 0 || du.size() != u.size())
    throw DimensionError("mol_rhs: state arrays must be n x d");
  const std::size_t n = u.size() / d;
  if (n < 3) throw std::invalid_argument("mol_rhs: need at least three nodes");
  constexpr std::size_t B = parallel::kReductionBlock;
  const std::size_t blocks = (n + B - 1) / B;

#pragma omp parallel for schedule(static) if (n >= parallel::kParallelThreshold)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * B;
    const std::size_t hi = std::min(n, lo + B);
    v.gradients(u.subspan(lo * d, (hi - lo) * d), du.subspan(lo * d, (hi - lo) * d));
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = 0; j < d; ++j)
        du[i * d + j] = laplacian(u, i, j, n, d) * inv_dx2 - du[i * d + j];
  }
}

}  // namespace frontlab::kernels
