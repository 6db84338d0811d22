#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "frontlab/linalg.hpp"

namespace frontlab {

class Potential;

/// Smooth cutoff chi: 1 on (-inf, 0], 0 on [1, +inf), nonincreasing, C-infinity.
///
/// chi(x) = g(1 - x) / (g(1 - x) + g(x)) with g(t) = exp(-1/t) for t > 0 and
/// g(t) = 0 otherwise. Values of the perturbed potential depend on this choice.
struct CutoffFn {
  static double value(double x);
  static double derivative(double x);
  static double second_derivative(double x);
};

/// ||u|| = w_1^{-1/2} (sum_j w_j y_j^2)^{1/2}, with y = B^T u the coordinates of
/// u in the orthonormal basis B (columns). Equal to |u| along the first basis axis.
class AnisotropicNorm {
 public:
  AnisotropicNorm(std::vector<double> weights, Matrix basis);

  double operator()(std::span<const double> u) const;

  /// G u, where G = B diag(w_j / w_1) B^T, so that grad ||u|| = G u / ||u||.
  std::vector<double> metric_apply(std::span<const double> u) const;
  const Matrix& metric() const { return metric_; }

  const std::vector<double>& weights() const { return weights_; }
  const Matrix& basis() const { return basis_; }
  std::size_t dim() const { return weights_.size(); }

 private:
  std::vector<double> weights_;
  Matrix basis_;
  Matrix metric_;
};

struct CubicFamily {
  double b = 1.0;
};

/// V(u) = 1/2 sum_j mu_j u_j^2 + g |u|^4 / 4.
struct QuarticSaddle {
  std::vector<double> mu;
  double g = 1.0;
};

struct Monomial {
  double coef = 0.0;
  std::vector<int> powers;
};

struct PolynomialPotential {
  std::vector<Monomial> terms;
};

/// W(u) = chi((||u|| - eps) / delta) * nu |u|^2 / 2 + V(u).
struct PerturbedPotential {
  std::shared_ptr<const Potential> base;
  double eps = 0.0;
  double delta = 0.0;
  double nu = 0.0;
  AnisotropicNorm norm;
  std::vector<double> base_mu;  // ascending eigenvalues of D^2V(0)
  double base_c_lin = 0.0;
};

/// An immutable C^2 potential on R^d with V(0) = 0 and grad V(0) = 0.
class Potential {
 public:
  using Kind = std::variant<CubicFamily, QuarticSaddle, PolynomialPotential, PerturbedPotential>;

  /// f(s) = s(1 - s)(1 + b s), V' = -f. Requires b > 0.
  static Potential cubic(double b);
  /// Requires g > 0 and a nonempty mu.
  static Potential quartic_saddle(std::vector<double> mu, double g);
  /// Terms of total degree < 2 are rejected so that the origin stays a
  /// normalized critical point.
  static Potential polynomial(std::size_t d, std::vector<Monomial> terms);

  std::size_t dim() const { return dim_; }
  const Kind& kind() const { return kind_; }
  std::string kind_name() const;

  double value(std::span<const double> u) const;
  void gradient(std::span<const double> u, std::span<double> out) const;
  std::vector<double> gradient(std::span<const double> u) const;
  Matrix hessian(std::span<const double> u) const;

  /// Batch evaluation over a row-major n x d array of states.
  void values(std::span<const double> states, std::span<double> out) const;
  void gradients(std::span<const double> states, std::span<double> out) const;

 private:
  friend Potential build_perturbed(const Potential&, double, double, double);
  Potential(std::size_t dim, Kind kind) : dim_(dim), kind_(std::move(kind)) {}

  void check_dim(std::size_t n) const;

  std::size_t dim_ = 1;
  Kind kind_;
};

/// Builds W_{eps,delta}. The anisotropic norm uses the eigenbasis of
/// D^2V(0) and weights lambda^pert_{j,+}. Throws AdmissibilityError unless
/// mu_1 + nu > 0, and std::invalid_argument unless eps, delta > 0.
Potential build_perturbed(const Potential& base, double eps, double delta, double nu);

struct HypothesisReport {
  double sample_radius = 0.0;
  double coercivity_ratio_min = 0.0;       // min of u.gradV(u)/|u|^2 on |u| = R
  std::vector<double> coercivity_witness;  // argmin of the ratio
  bool coercive = false;                   // ratio_min > 0
  bool value_zero_at_origin = false;
  bool gradient_zero_at_origin = false;
  double min_value = 0.0;
  std::vector<double> min_witness;
  bool critical_point_hypothesis = false;  // V(0)=0, gradV(0)=0, min V < 0
};

/// Sampled evidence for coercivity at radius R and for the origin being a
/// non-minimal critical point. Deterministic for a given seed.
HypothesisReport check_hypotheses(const Potential& v, double sample_radius,
                                  std::size_t sample_count, std::uint64_t seed = 0x5eedULL);

}  // namespace frontlab
