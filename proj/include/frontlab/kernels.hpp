#pragma once

// Data-parallel inner loops. Each kernel has a serial reference version kept
// for testing and an OpenMP version used by the solvers; the two are compared
// in tests/test_kernels.cpp and bench/bench_kernels.cpp.

#include <cstddef>
#include <span>
#include <vector>

#include "frontlab/potential.hpp"
#include "frontlab/profile.hpp"

namespace frontlab::kernels {

/// Quadrature weights of the discrete energy in a frame travelling at c:
///   E[w] = sum_i kinetic_i |w_{i+1} - w_i|^2 / 2 + sum_i mass_i V(w_i),
/// with kinetic_i = exp(c xi_{i+1/2}) / h (midpoint rule on the
/// half-step difference quotient) and mass_i = h omega_i exp(c xi_i)
/// (trapezoid rule, omega = 1/2 at both ends).
struct EnergyWeights {
  std::vector<double> kinetic;
  std::vector<double> mass;
};

EnergyWeights energy_weights(const Grid& grid, double c);

/// Per-call buffers reused across iterations.
struct Scratch {
  std::vector<double> values;
  std::vector<double> grads;
};

double energy_serial(const Potential& v, const EnergyWeights& wts, std::span<const double> w);
double energy_parallel(const Potential& v, const EnergyWeights& wts, std::span<const double> w,
                       Scratch& scratch);

/// Energy plus its gradient with respect to every nodal value (n x d).
double energy_gradient_serial(const Potential& v, const EnergyWeights& wts,
                              std::span<const double> w, std::span<double> grad);
double energy_gradient_parallel(const Potential& v, const EnergyWeights& wts,
                                std::span<const double> w, std::span<double> grad,
                                Scratch& scratch);

/// Method-of-lines right-hand side of u_t = -grad V(u) + u_xx with
/// homogeneous Neumann ends (mirror ghost nodes).
void mol_rhs_serial(const Potential& v, std::span<const double> u, double inv_dx2,
                    std::span<double> du);
void mol_rhs_parallel(const Potential& v, std::span<const double> u, double inv_dx2,
                      std::span<double> du);

}  // namespace frontlab::kernels
