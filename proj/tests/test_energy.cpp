#include <gtest/gtest.h>

#include <cmath>

#include "frontlab/energy.hpp"
#include "frontlab/errors.hpp"
#include "frontlab/kernels.hpp"

using namespace frontlab;

namespace {

const std::vector<double> kE1{1.0};

double cubic_v(double s, double b) { return -(s * s / 2 + (b - 1) * s * s * s / 3 - b * s * s * s * s / 4); }

ClassifyOptions quick_options() {
  ClassifyOptions o;
  o.grid = Grid(-30.0, 60.0, 1801);
  o.descent.record_trace = false;
  return o;
}

}  // namespace

TEST(WeightedEnergy, ZeroProfileIsExactlyZero) {
  for (double c : {0.2, 1.0, 3.0}) {
    for (const Potential& v : {Potential::cubic(1.0), Potential::quartic_saddle({-1.0, 2.0}, 1.0)}) {
      const Profile w(Grid(-10.0, 30.0, 401), v.dim());
      EXPECT_EQ(weighted_energy(w, c, v), 0.0);
    }
  }
}

TEST(WeightedEnergy, ConstantStateGeometricSum) {
  const double c = 0.5;
  const Grid g(-4.0, 4.0, 81);
  const Potential v = Potential::cubic(1.0);
  const Profile w(g, 1, std::vector<double>(81, 1.0));
  // h (sum_i e^{c xi_i} - (e^{c xi_0} + e^{c xi_n}) / 2) as a geometric series.
  const double h = g.h(), q = std::exp(c * h);
  const double sum = std::exp(c * g.xi_min()) * (std::pow(q, 81) - 1.0) / (q - 1.0);
  const double trapezoid = h * (sum - 0.5 * (std::exp(c * g.xi_min()) + std::exp(c * g.xi_max())));
  EXPECT_NEAR(weighted_energy(w, c, v), -0.25 * trapezoid, 1e-12 * trapezoid);
}

TEST(WeightedEnergy, ProofTestFunctionMatchesScalarQuadrature) {
  const double c = 1.9, ct = 1.95, b = 1.0;
  const Grid g(-20.0, 80.0, 20001);
  const Potential v = Potential::cubic(b);
  const double e = weighted_energy(proof_test_function(ct, g, kE1), c, v);
  EXPECT_LT(e, 0.0);
  // Closed-form left half plus a fine midpoint rule on the right half.
  double ref = std::exp(c * 0.0) / c * cubic_v(1.0, b) * (1.0 - std::exp(-20.0 * c));
  const int m = 2000000;
  const double hh = 80.0 / m;
  for (int i = 0; i < m; ++i) {
    const double xi = (i + 0.5) * hh, s = std::exp(-ct * xi / 2);
    ref += hh * std::exp(c * xi) * (0.5 * (ct * s / 2) * (ct * s / 2) + cubic_v(s, b));
  }
  EXPECT_NEAR(e, ref, 2e-3 * std::abs(ref));
}

TEST(WeightedEnergy, GradientMatchesFiniteDifferences) {
  const Grid g(-10.0, 10.0, 401);
  const double c = 0.8;
  for (const Potential& v : {Potential::cubic(3.0), Potential::quartic_saddle({-1.0, 0.5}, 1.0)}) {
    Profile w(g, v.dim());
    for (std::size_t i = 0; i < g.n(); ++i)
      for (std::size_t j = 0; j < v.dim(); ++j) w.at(i)[j] = 0.5 * (1.0 - std::tanh(g.at(i) / (2.0 + j))) / (1.0 + j);
    const auto grad = weighted_energy_gradient(w, c, v);
    double gmax = 0.0;
    for (double x : grad) gmax = std::max(gmax, std::abs(x));
    const double h = 1e-6;
    for (std::size_t k = 0; k < grad.size(); k += 3) {
      Profile p = w, m = w;
      p.values()[k] += h;
      m.values()[k] -= h;
      const double fd = (weighted_energy(p, c, v) - weighted_energy(m, c, v)) / (2 * h);
      EXPECT_LE(std::abs(fd - grad[k]), 1e-5 * std::max(std::abs(grad[k]), 1e-3 * gmax)) << k;
    }
    // Directional derivatives along smooth directions.
    for (double freq : {0.3, 1.0, 2.5}) {
      Profile p = w, m = w;
      double dot = 0.0;
      for (std::size_t k = 0; k < grad.size(); ++k) {
        const double dir = std::sin(freq * static_cast<double>(k) * g.h());
        p.values()[k] += h * dir;
        m.values()[k] -= h * dir;
        dot += grad[k] * dir;
      }
      const double fd = (weighted_energy(p, c, v) - weighted_energy(m, c, v)) / (2 * h);
      EXPECT_LE(std::abs(fd - dot), 1e-5 * std::abs(dot)) << freq;
    }
  }
}

TEST(WeightedEnergy, RejectsNonPositiveSpeed) {
  const Profile w(Grid(-1.0, 1.0, 16), 1);
  EXPECT_THROW(weighted_energy(w, 0.0, Potential::cubic(1.0)), std::invalid_argument);
}

TEST(ProofTestFunction, ShapeExamples) {
  const double ct = 1.8, eps = 0.25, delta = 0.05;
  const Grid g(-10.0, 10.0, 2001);
  const Profile w = proof_test_function(ct, g, kE1);
  EXPECT_EQ(w.at(500)[0], 1.0);   // xi = -5
  EXPECT_EQ(w.at(1000)[0], 1.0);  // xi = 0
  const double xi0 = 2.0 / ct * std::log(1.0 / (eps + delta));
  const Grid g2(-10.0, xi0, 2001);
  EXPECT_NEAR(proof_test_function(ct, g2, kE1).at(2000)[0], eps + delta, 1e-14);
  const Profile ws = proof_test_function(ct, g, Potential::quartic_saddle({0.5, -1.0}, 1.0));
  EXPECT_EQ(ws.at(0)[0], 0.0);
  EXPECT_EQ(std::abs(ws.at(0)[1]), 1.0);
}

TEST(MinimizeEnergy, NonnegativePotentialRelaxesToZero) {
  const Potential v = Potential::polynomial(1, {{0.5, {2}}});
  const Grid g(-20.0, 40.0, 1201);
  const auto r = minimize_energy(v, 1.0, g);
  EXPECT_GE(r.energy, 0.0);
  EXPECT_LT(r.energy, 1e-6);
  for (std::size_t i = 0; i < g.n(); ++i)
    if (g.at(i) > -5.0) { EXPECT_LT(std::abs(r.profile.at(i)[0]), 1e-3) << g.at(i); }
}

TEST(MinimizeEnergy, TraceIsMonotone) {
  const auto r = minimize_energy(Potential::cubic(1.0), 2.5, Grid(-30.0, 60.0, 1801));
  ASSERT_GE(r.trace.size(), 2u);
  for (std::size_t k = 1; k < r.trace.size(); ++k) EXPECT_LE(r.trace[k], r.trace[k - 1]);
  EXPECT_EQ(r.trace.back(), r.energy);
}

TEST(MinimizeEnergy, BelowLinearSpeedDescendsFarBelowZero) {
  const auto r = minimize_energy(Potential::cubic(1.0), 1.5, default_energy_grid());
  EXPECT_LT(r.energy, -10.0);
}

TEST(MinimizeEnergy, AboveLinearSpeedStaysNonnegative) {
  DescentOptions o;
  const auto r = minimize_energy(Potential::cubic(1.0), 2.5, default_energy_grid(), o);
  EXPECT_GE(r.energy, -o.stop_tol);
}

TEST(ClassifySpeed, CubicFourExamples) {
  const Potential v = Potential::cubic(4.0);
  EXPECT_EQ(classify_speed(v, 1.0).probe.evidence, SpeedEvidence::MinusInfinity);
  const auto above = classify_speed(v, 3.0);
  EXPECT_EQ(above.probe.evidence, SpeedEvidence::Zero);
  EXPECT_GE(above.probe.energy, -1e-9);
}

TEST(ClassifySpeed, EvidenceIsMonotoneInSpeed) {
  const Potential v = Potential::cubic(4.0);
  const auto o = quick_options();
  bool seen_zero = false;
  for (double c : {1.6, 1.9, 2.05, 2.2, 2.5, 3.0}) {
    const auto p = classify_speed(v, c, o).probe;
    if (seen_zero) { EXPECT_EQ(p.evidence, SpeedEvidence::Zero) << c; }
    seen_zero = seen_zero || p.evidence == SpeedEvidence::Zero;
  }
  EXPECT_TRUE(seen_zero);
}

TEST(ClassifySpeed, JustAboveThresholdEnergyIsNearZeroFromAbove) {
  const auto p = classify_speed(Potential::cubic(4.0), 2.2, quick_options()).probe;
  EXPECT_EQ(p.evidence, SpeedEvidence::Zero);
  EXPECT_GE(p.energy, -1e-9);
  EXPECT_LT(p.energy, 1e-2);
}

TEST(EstimateCNonlin, BracketErrors) {
  const Potential v = Potential::cubic(4.0);
  const auto o = quick_options();
  EXPECT_THROW(estimate_c_nonlin(v, 2.5, 3.0, 1e-2, o), BracketError);
  EXPECT_THROW(estimate_c_nonlin(v, 1.0, 1.5, 1e-2, o), BracketError);
  EXPECT_THROW(estimate_c_nonlin(v, 3.0, 1.0, 1e-2, o), BracketError);
  EXPECT_THROW(estimate_c_nonlin(v, 1.0, 3.0, 0.0, o), std::invalid_argument);
}

TEST(EstimateCNonlin, CoarseCubicFourIsDeterministic) {
  const Potential v = Potential::cubic(4.0);
  const auto o = quick_options();
  const auto a = estimate_c_nonlin(v, 1.5, 3.0, 2e-2, o);
  const auto b = estimate_c_nonlin(v, 1.5, 3.0, 2e-2, o);
  EXPECT_EQ(a, b);
  EXPECT_LE(a.c_high - a.c_low, 2e-2);
  EXPECT_NEAR(a.c_estimate, 3.0 / std::sqrt(2.0), 0.05);
  ASSERT_TRUE(a.witness.has_value());
  EXPECT_LT(weighted_energy(*a.witness, a.c_low, v), -1.0);
  EXPECT_EQ(a.evaluations, a.probes.size());
}

TEST(EnergyGapBound, Examples) {
  EXPECT_NEAR(energy_gap_bound(1.0, 2.0, 0.005, 0.005, 2.0), 0.01, 1e-15);
  double prev = energy_gap_bound(1.5, 1.8, 0.25, 0.05, 2.0);
  for (double s : {1e-1, 1e-2, 1e-4, 1e-8}) {
    const double b = energy_gap_bound(1.5, 1.8, 0.5 * s, 0.5 * s, 2.0);
    EXPECT_LT(b, prev);
    prev = b;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(EnergyGapBound, DominatesMeasuredGap) {
  const Potential base = Potential::cubic(1.0);
  for (auto [eps, delta] : {std::pair{0.25, 0.05}, std::pair{0.1, 0.01}, std::pair{0.02, 4e-4}}) {
    const Potential w = build_perturbed(base, eps, delta, 2.0);
    const double c = 1.5, ct = 1.8;
    const Profile p = proof_test_function(ct, Grid(-40.0, 120.0, 16001), kE1);
    const double gap = weighted_energy(p, c, w) - weighted_energy(p, c, base);
    EXPECT_GE(gap, 0.0);
    EXPECT_LE(gap, energy_gap_bound(c, ct, eps, delta, 2.0));
  }
}
