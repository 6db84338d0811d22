#pragma once

#include <cstddef>
#include <vector>

#include "frontlab/linalg.hpp"
#include "frontlab/potential.hpp"

namespace frontlab {

/// Roots of a real quadratic. For a complex pair, `first` holds the real
/// part and `second` the positive imaginary part.
struct RootPair {
  bool complex = false;
  double first = 0.0;   // lambda_minus, or real part
  double second = 0.0;  // lambda_plus, or imaginary part
  friend bool operator==(const RootPair&, const RootPair&) = default;
};

struct SpectralReport {
  std::vector<double> mu;  // ascending eigenvalues of D^2V(0)
  Matrix eigenvectors;     // columns
  double c_lin = 0.0;
  /// lambda_{j,-/+} = c_lin/2 -/+ sqrt(c_lin^2/4 + mu_j) (reversed frame at c_lin).
  std::vector<RootPair> lambda_pm;
  int j0 = 1;
  int dim_hsu = 0;
  int dim_mu = 0;
  friend bool operator==(const SpectralReport&, const SpectralReport&) = default;
};

struct PerturbedPair {
  double minus = 0.0;
  double plus = 0.0;
  friend bool operator==(const PerturbedPair&, const PerturbedPair&) = default;
};

struct PerturbedSpectrum {
  double nu = 0.0;
  std::vector<PerturbedPair> pairs;  // lambda^pert_{j,-}, lambda^pert_{j,+}
};

enum class NuStatus { Ok, FailsFirst, FailsSecond };

/// 2 sqrt(-mu1) if mu1 < 0, else 0.
double linear_speed(double mu1);

/// Eigenvalues of the travelling-wave linearization at speed c along an
/// eigen-direction with Hessian eigenvalue mu: -c/2 -/+ sqrt(c^2/4 + mu).
RootPair tw_eigenvalues(double c, double mu);

/// c_lin/2 -/+ sqrt(c_lin^2/4 + mu_j + nu). Throws AdmissibilityError unless
/// min(mu) + nu > 0.
PerturbedSpectrum perturbed_eigenvalues(double c_lin, const std::vector<double>& mu, double nu);

/// Checks mu_1 + nu > 0, then lambda^pert_{1,+} / lambda^pert_{d,+} > 1/sqrt(3).
NuStatus nu_admissible(double c_lin, const std::vector<double>& mu, double nu);

/// (lambda^pert_{j,+})^2 - nu.
double barrier_margin(double c_lin, double mu_j, double nu);

/// Largest j (1-based) with mu_j equal to mu_1 within a relative 1e-10.
int degenerate_count(const std::vector<double>& mu);

SpectralReport analyze(const Potential& v);

}  // namespace frontlab
