#include "frontlab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "frontlab/errors.hpp"
#include "frontlab/spectral.hpp"

namespace frontlab {

// ---------------------------------------------------------------- cutoff

namespace {

// g(t) = exp(-1/t) for t > 0; derivatives g' = g / t^2, g'' = g (1 - 2t) / t^4.
struct Glue {
  double g = 0.0, d1 = 0.0, d2 = 0.0;
};

Glue glue(double t) {
  if (t <= 0.0) return {};
  const double g = std::exp(-1.0 / t);
  const double t2 = t * t;
  return {g, g / t2, g * (1.0 - 2.0 * t) / (t2 * t2)};
}

}  // namespace

double CutoffFn::value(double x) {
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  const double a = glue(1.0 - x).g;
  const double b = glue(x).g;
  return a / (a + b);
}

double CutoffFn::derivative(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const Glue ga = glue(1.0 - x);
  const Glue gb = glue(x);
  const double s = ga.g + gb.g;
  // A = g(1-x), A' = -g'(1-x); B = g(x), B' = g'(x); chi' = (A'B - AB') / S^2.
  return (-ga.d1 * gb.g - ga.g * gb.d1) / (s * s);
}

double CutoffFn::second_derivative(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const Glue ga = glue(1.0 - x);
  const Glue gb = glue(x);
  const double a = ga.g, a1 = -ga.d1, a2 = ga.d2;
  const double b = gb.g, b1 = gb.d1, b2 = gb.d2;
  const double s = a + b;
  const double s1 = a1 + b1;
  const double num = a1 * b - a * b1;
  const double num1 = a2 * b - a * b2;
  return num1 / (s * s) - 2.0 * num * s1 / (s * s * s);
}

// ------------------------------------------------------ anisotropic norm

AnisotropicNorm::AnisotropicNorm(std::vector<double> weights, Matrix basis)
    : weights_(std::move(weights)), basis_(std::move(basis)) {
  const std::size_t d = weights_.size();
  if (d == 0 || basis_.rows() != d || basis_.cols() != d)
    throw std::invalid_argument("AnisotropicNorm: weights and basis shapes disagree");
  for (double w : weights_)
    if (!(w > 0.0)) throw std::invalid_argument("AnisotropicNorm: weights must be positive");
  metric_ = Matrix(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k)
        s += basis_(i, k) * (weights_[k] / weights_[0]) * basis_(j, k);
      metric_(i, j) = s;
    }
}

double AnisotropicNorm::operator()(std::span<const double> u) const {
  double s = 0.0;
  const std::size_t d = weights_.size();
  for (std::size_t k = 0; k < d; ++k) {
    double y = 0.0;
    for (std::size_t i = 0; i < d; ++i) y += basis_(i, k) * u[i];
    s += weights_[k] * y * y;
  }
  return std::sqrt(s / weights_[0]);
}

std::vector<double> AnisotropicNorm::metric_apply(std::span<const double> u) const {
  return metric_ * u;
}

// ------------------------------------------------------------- families

namespace {

double ipow(double x, int p) {
  double r = 1.0;
  for (int k = 0; k < p; ++k) r *= x;
  return r;
}

double cubic_value(double b, double u) {
  const double u2 = u * u;
  return -(0.5 * u2 + (b - 1.0) * u2 * u / 3.0 - 0.25 * b * u2 * u2);
}

double cubic_gradient(double b, double u) { return -(u + (b - 1.0) * u * u - b * u * u * u); }

double cubic_hessian(double b, double u) { return -(1.0 + 2.0 * (b - 1.0) * u - 3.0 * b * u * u); }

double quartic_value(const QuarticSaddle& q, std::span<const double> u) {
  double quad = 0.0, r2 = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    quad += q.mu[j] * u[j] * u[j];
    r2 += u[j] * u[j];
  }
  return 0.5 * quad + 0.25 * q.g * r2 * r2;
}

void quartic_gradient(const QuarticSaddle& q, std::span<const double> u, std::span<double> out) {
  double r2 = 0.0;
  for (double x : u) r2 += x * x;
  for (std::size_t j = 0; j < u.size(); ++j) out[j] = q.mu[j] * u[j] + q.g * r2 * u[j];
}

double poly_value(const PolynomialPotential& p, std::span<const double> u) {
  double v = 0.0;
  for (const auto& t : p.terms) {
    double m = t.coef;
    for (std::size_t i = 0; i < u.size(); ++i) m *= ipow(u[i], t.powers[i]);
    v += m;
  }
  return v;
}

void poly_gradient(const PolynomialPotential& p, std::span<const double> u, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t d = u.size();
  for (const auto& t : p.terms) {
    for (std::size_t k = 0; k < d; ++k) {
      if (t.powers[k] == 0) continue;
      double m = t.coef * t.powers[k] * ipow(u[k], t.powers[k] - 1);
      for (std::size_t i = 0; i < d; ++i)
        if (i != k) m *= ipow(u[i], t.powers[i]);
      out[k] += m;
    }
  }
}

Matrix poly_hessian(const PolynomialPotential& p, std::span<const double> u) {
  const std::size_t d = u.size();
  Matrix h(d, d);
  for (const auto& t : p.terms) {
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t l = k; l < d; ++l) {
        std::vector<int> pw = t.powers;
        double m = t.coef;
        if (pw[k] == 0) continue;
        m *= pw[k];
        pw[k] -= 1;
        if (pw[l] == 0) continue;
        m *= pw[l];
        pw[l] -= 1;
        for (std::size_t i = 0; i < d; ++i) m *= ipow(u[i], pw[i]);
        h(k, l) += m;
        if (k != l) h(l, k) += m;
      }
    }
  }
  return h;
}

double squared(std::span<const double> u) {
  double s = 0.0;
  for (double x : u) s += x * x;
  return s;
}

}  // namespace

Potential Potential::cubic(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("cubic family requires b > 0");
  return Potential(1, CubicFamily{b});
}

Potential Potential::quartic_saddle(std::vector<double> mu, double g) {
  if (mu.empty()) throw ConfigError("quartic-saddle requires a nonempty mu vector");
  if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("quartic-saddle requires g > 0");
  for (double m : mu)
    if (!std::isfinite(m)) throw ConfigError("quartic-saddle mu entries must be finite");
  const std::size_t d = mu.size();
  return Potential(d, QuarticSaddle{std::move(mu), g});
}

Potential Potential::polynomial(std::size_t d, std::vector<Monomial> terms) {
  if (d == 0) throw ConfigError("polynomial potential requires d >= 1");
  for (const auto& t : terms) {
    if (t.powers.size() != d) throw DimensionError("polynomial term powers must have length d");
    int degree = 0;
    for (int p : t.powers) {
      if (p < 0) throw ConfigError("polynomial powers must be nonnegative");
      degree += p;
    }
    if (degree < 2 && t.coef != 0.0)
      throw ConfigError("polynomial terms of total degree < 2 violate V(0) = 0, grad V(0) = 0");
    if (!std::isfinite(t.coef)) throw ConfigError("polynomial coefficients must be finite");
  }
  return Potential(d, PolynomialPotential{std::move(terms)});
}

std::string Potential::kind_name() const {
  struct Visitor {
    std::string operator()(const CubicFamily&) const { return "cubic"; }
    std::string operator()(const QuarticSaddle&) const { return "quartic-saddle"; }
    std::string operator()(const PolynomialPotential&) const { return "polynomial"; }
    std::string operator()(const PerturbedPotential&) const { return "perturbed"; }
  };
  return std::visit(Visitor{}, kind_);
}

void Potential::check_dim(std::size_t n) const {
  if (n != dim_)
    throw DimensionError("state has dimension " + std::to_string(n) + ", potential expects " +
                         std::to_string(dim_));
}

namespace {

struct PerturbedParts {
  double s = 0.0;
  double chi = 1.0;
  double norm = 0.0;
};

PerturbedParts perturbed_parts(const PerturbedPotential& p, std::span<const double> u) {
  PerturbedParts r;
  r.norm = p.norm(u);
  r.s = (r.norm - p.eps) / p.delta;
  r.chi = CutoffFn::value(r.s);
  return r;
}

}  // namespace

double Potential::value(std::span<const double> u) const {
  check_dim(u.size());
  struct Visitor {
    std::span<const double> u;
    double operator()(const CubicFamily& c) const { return cubic_value(c.b, u[0]); }
    double operator()(const QuarticSaddle& q) const { return quartic_value(q, u); }
    double operator()(const PolynomialPotential& p) const { return poly_value(p, u); }
    double operator()(const PerturbedPotential& p) const {
      const double base = p.base->value(u);
      const PerturbedParts parts = perturbed_parts(p, u);
      if (parts.s >= 1.0) return base;
      return parts.chi * 0.5 * p.nu * squared(u) + base;
    }
  };
  return std::visit(Visitor{u}, kind_);
}

void Potential::gradient(std::span<const double> u, std::span<double> out) const {
  check_dim(u.size());
  check_dim(out.size());
  struct Visitor {
    std::span<const double> u;
    std::span<double> out;
    void operator()(const CubicFamily& c) const { out[0] = cubic_gradient(c.b, u[0]); }
    void operator()(const QuarticSaddle& q) const { quartic_gradient(q, u, out); }
    void operator()(const PolynomialPotential& p) const { poly_gradient(p, u, out); }
    void operator()(const PerturbedPotential& p) const {
      p.base->gradient(u, out);
      const PerturbedParts parts = perturbed_parts(p, u);
      if (parts.s >= 1.0) return;
      for (std::size_t j = 0; j < u.size(); ++j) out[j] += parts.chi * p.nu * u[j];
      if (parts.s > 0.0) {
        const double dchi = CutoffFn::derivative(parts.s) / p.delta;
        const double q = 0.5 * p.nu * squared(u);
        const std::vector<double> gu = p.norm.metric_apply(u);
        for (std::size_t j = 0; j < u.size(); ++j) out[j] += dchi * q * gu[j] / parts.norm;
      }
    }
  };
  std::visit(Visitor{u, out}, kind_);
}

std::vector<double> Potential::gradient(std::span<const double> u) const {
  std::vector<double> g(dim_);
  gradient(u, g);
  return g;
}

Matrix Potential::hessian(std::span<const double> u) const {
  check_dim(u.size());
  struct Visitor {
    std::span<const double> u;
    Matrix operator()(const CubicFamily& c) const { return Matrix{{cubic_hessian(c.b, u[0])}}; }
    Matrix operator()(const QuarticSaddle& q) const {
      const std::size_t d = u.size();
      const double r2 = squared(u);
      Matrix h(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          h(i, j) = 2.0 * q.g * u[i] * u[j] + (i == j ? q.mu[i] + q.g * r2 : 0.0);
      return h;
    }
    Matrix operator()(const PolynomialPotential& p) const { return poly_hessian(p, u); }
    Matrix operator()(const PerturbedPotential& p) const {
      Matrix h = p.base->hessian(u);
      const PerturbedParts parts = perturbed_parts(p, u);
      if (parts.s >= 1.0) return h;
      const std::size_t d = u.size();
      for (std::size_t i = 0; i < d; ++i) h(i, i) += parts.chi * p.nu;
      if (parts.s > 0.0) {
        const double n = parts.norm;
        const double d1 = CutoffFn::derivative(parts.s) / p.delta;
        const double d2 = CutoffFn::second_derivative(parts.s) / (p.delta * p.delta);
        const double q = 0.5 * p.nu * squared(u);
        const std::vector<double> gu = p.norm.metric_apply(u);
        const Matrix& g = p.norm.metric();
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j) {
            const double dn_i = gu[i] / n;
            const double dn_j = gu[j] / n;
            const double hess_n = g(i, j) / n - gu[i] * gu[j] / (n * n * n);
            h(i, j) += d2 * q * dn_i * dn_j +
                       d1 * (q * hess_n + dn_i * p.nu * u[j] + p.nu * u[i] * dn_j);
          }
      }
      return h;
    }
  };
  return std::visit(Visitor{u}, kind_);
}

void Potential::values(std::span<const double> states, std::span<double> out) const {
  const std::size_t n = out.size();
  if (states.size() != n * dim_) throw DimensionError("batch value: states must be n x d");
  if (const auto* c = std::get_if<CubicFamily>(&kind_)) {
    const double b = c->b;
    for (std::size_t i = 0; i < n; ++i) out[i] = cubic_value(b, states[i]);
    return;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = value(states.subspan(i * dim_, dim_));
}

void Potential::gradients(std::span<const double> states, std::span<double> out) const {
  if (states.size() != out.size() || states.size() % dim_ != 0)
    throw DimensionError("batch gradient: states and output must be n x d");
  const std::size_t n = states.size() / dim_;
  if (const auto* c = std::get_if<CubicFamily>(&kind_)) {
    const double b = c->b;
    for (std::size_t i = 0; i < n; ++i) out[i] = cubic_gradient(b, states[i]);
    return;
  }
  for (std::size_t i = 0; i < n; ++i)
    gradient(states.subspan(i * dim_, dim_), out.subspan(i * dim_, dim_));
}

// ------------------------------------------------------------ perturbed

Potential build_perturbed(const Potential& base, double eps, double delta, double nu) {
  if (!(eps > 0.0) || !(delta > 0.0))
    throw std::invalid_argument("build_perturbed: eps and delta must be positive");
  const std::size_t d = base.dim();
  const std::vector<double> zero(d, 0.0);
  const SymmetricEigen eig = symmetric_eigen(base.hessian(zero));
  const double mu1 = eig.values.front();
  if (!(mu1 + nu > 0.0))
    throw AdmissibilityError("perturbation requires mu_1 + nu > 0 (mu_1 = " + std::to_string(mu1) +
                             ", nu = " + std::to_string(nu) + ")");
  const double c_lin = linear_speed(mu1);
  const PerturbedSpectrum spec = perturbed_eigenvalues(c_lin, eig.values, nu);
  std::vector<double> weights(d);
  for (std::size_t j = 0; j < d; ++j) weights[j] = spec.pairs[j].plus;
  PerturbedPotential p{std::make_shared<const Potential>(base),
                       eps,
                       delta,
                       nu,
                       AnisotropicNorm(std::move(weights), eig.vectors),
                       eig.values,
                       c_lin};
  return Potential(d, std::move(p));
}

// ----------------------------------------------------------- hypotheses

namespace {

std::vector<double> random_direction(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(d);
  double n = 0.0;
  do {
    for (double& v : x) v = normal(rng);
    n = norm2(x);
  } while (n < 1e-12);
  for (double& v : x) v /= n;
  return x;
}

// Backtracking gradient descent used to polish sampled minimum candidates.
std::vector<double> polish_minimum(const Potential& v, std::vector<double> x, double radius) {
  double fx = v.value(x);
  double step = 0.1;
  for (int it = 0; it < 500; ++it) {
    const std::vector<double> g = v.gradient(x);
    const double gg = dot(g, g);
    if (gg < 1e-28) break;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      std::vector<double> y = x;
      for (std::size_t j = 0; j < y.size(); ++j) y[j] -= step * g[j];
      if (norm2(y) > radius) {
        step *= 0.5;
        continue;
      }
      const double fy = v.value(y);
      if (fy <= fx - 1e-4 * step * gg) {
        x = std::move(y);
        fx = fy;
        accepted = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return x;
}

}  // namespace

HypothesisReport check_hypotheses(const Potential& v, double sample_radius,
                                  std::size_t sample_count, std::uint64_t seed) {
  if (!(sample_radius > 0.0)) throw std::invalid_argument("check_hypotheses: R must be positive");
  const std::size_t d = v.dim();
  std::mt19937_64 rng(seed);
  HypothesisReport r;
  r.sample_radius = sample_radius;

  const std::vector<double> zero(d, 0.0);
  r.value_zero_at_origin = std::abs(v.value(zero)) <= 1e-14;
  const std::vector<double> g0 = v.gradient(zero);
  r.gradient_zero_at_origin = norm2(g0) <= 1e-12;

  // Coercivity ratio on the sphere |u| = R; in 1-D the sphere is {-R, R}.
  std::vector<std::vector<double>> sphere;
  if (d == 1) {
    sphere = {{-sample_radius}, {sample_radius}};
  } else {
    for (std::size_t k = 0; k < std::max<std::size_t>(sample_count, 1); ++k) {
      std::vector<double> u = random_direction(rng, d);
      for (double& x : u) x *= sample_radius;
      sphere.push_back(std::move(u));
    }
  }
  r.coercivity_ratio_min = std::numeric_limits<double>::infinity();
  for (const auto& u : sphere) {
    const double ratio = dot(u, v.gradient(u)) / dot(u, u);
    if (ratio < r.coercivity_ratio_min) {
      r.coercivity_ratio_min = ratio;
      r.coercivity_witness = u;
    }
  }
  r.coercive = r.coercivity_ratio_min > 0.0;

  // Minimum of V over the ball: sample, then polish the best candidates.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, std::vector<double>>> candidates;
  candidates.emplace_back(v.value(zero), zero);
  for (std::size_t k = 0; k < sample_count; ++k) {
    std::vector<double> u = random_direction(rng, d);
    const double rad = sample_radius * std::pow(unit(rng), 1.0 / static_cast<double>(d));
    for (double& x : u) x *= rad;
    candidates.emplace_back(v.value(u), std::move(u));
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  r.min_value = candidates.front().first;
  r.min_witness = candidates.front().second;
  const std::size_t polish = std::min<std::size_t>(8, candidates.size());
  for (std::size_t k = 0; k < polish; ++k) {
    std::vector<double> x = polish_minimum(v, candidates[k].second, sample_radius);
    const double fx = v.value(x);
    if (fx < r.min_value) {
      r.min_value = fx;
      r.min_witness = std::move(x);
    }
  }
  r.critical_point_hypothesis =
      r.value_zero_at_origin && r.gradient_zero_at_origin && r.min_value < 0.0;
  return r;
}

}  // namespace frontlab
