#include "frontlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "frontlab/errors.hpp"

namespace frontlab {

double linear_speed(double mu1) { return mu1 < 0.0 ? 2.0 * std::sqrt(-mu1) : 0.0; }

RootPair tw_eigenvalues(double c, double mu) {
  if (!(c > 0.0)) throw std::invalid_argument("tw_eigenvalues: c must be positive");
  const double disc = 0.25 * c * c + mu;
  if (disc >= 0.0) {
    const double r = std::sqrt(disc);
    return {false, -0.5 * c - r, -0.5 * c + r};
  }
  return {true, -0.5 * c, std::sqrt(-disc)};
}

PerturbedSpectrum perturbed_eigenvalues(double c_lin, const std::vector<double>& mu, double nu) {
  if (mu.empty()) throw std::invalid_argument("perturbed_eigenvalues: empty mu");
  const double mu1 = *std::min_element(mu.begin(), mu.end());
  if (!(mu1 + nu > 0.0)) throw AdmissibilityError("nu is not admissible: mu_1 + nu <= 0");
  PerturbedSpectrum s;
  s.nu = nu;
  s.pairs.reserve(mu.size());
  for (double m : mu) {
    const double r = std::sqrt(0.25 * c_lin * c_lin + m + nu);
    s.pairs.push_back({0.5 * c_lin - r, 0.5 * c_lin + r});
  }
  return s;
}

NuStatus nu_admissible(double c_lin, const std::vector<double>& mu, double nu) {
  const auto [lo, hi] = std::minmax_element(mu.begin(), mu.end());
  if (!(*lo + nu > 0.0)) return NuStatus::FailsFirst;
  const double r1 = std::sqrt(0.25 * c_lin * c_lin + *lo + nu);
  const double rd = std::sqrt(0.25 * c_lin * c_lin + *hi + nu);
  const double ratio = (0.5 * c_lin + r1) / (0.5 * c_lin + rd);
  return ratio > 1.0 / std::sqrt(3.0) ? NuStatus::Ok : NuStatus::FailsSecond;
}

double barrier_margin(double c_lin, double mu_j, double nu) {
  const double lp = 0.5 * c_lin + std::sqrt(0.25 * c_lin * c_lin + mu_j + nu);
  return lp * lp - nu;
}

int degenerate_count(const std::vector<double>& mu) {
  if (mu.empty()) return 0;
  const double tol = 1e-10 * std::max(1.0, std::abs(mu.front()));
  int j0 = 1;
  while (j0 < static_cast<int>(mu.size()) && std::abs(mu[j0] - mu.front()) <= tol) ++j0;
  return j0;
}

SpectralReport analyze(const Potential& v) {
  const std::size_t d = v.dim();
  const std::vector<double> zero(d, 0.0);
  SymmetricEigen eig = symmetric_eigen(v.hessian(zero));
  SpectralReport r;
  r.mu = std::move(eig.values);
  r.eigenvectors = std::move(eig.vectors);
  r.c_lin = linear_speed(r.mu.front());
  for (double m : r.mu) {
    double disc = 0.25 * r.c_lin * r.c_lin + m;
    // mu_1 = -c_lin^2/4 holds exactly in exact arithmetic.
    if (disc < 0.0 && disc > -1e-12 * std::max(1.0, std::abs(m))) disc = 0.0;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      r.lambda_pm.push_back({false, 0.5 * r.c_lin - s, 0.5 * r.c_lin + s});
    } else {
      r.lambda_pm.push_back({true, 0.5 * r.c_lin, std::sqrt(-disc)});
    }
  }
  r.j0 = degenerate_count(r.mu);
  r.dim_hsu = static_cast<int>(d) + r.j0;
  r.dim_mu = static_cast<int>(d) - r.j0;
  return r;
}

}  // namespace frontlab
