#pragma once

#include <cstddef>
#include <span>

namespace frontlab {

/// Amplitude band in which the decay rate is fitted.
struct FitWindow {
  double lo = 1e-10;
  double hi = 1e-4;
  std::size_t min_samples = 32;
};

struct TailFit {
  double lambda = 0.0;     // negated slope of ln|phi| against xi
  double intercept = 0.0;  // ln|phi| at xi = 0 on the fitted line
  double rms = 0.0;        // root-mean-square residual of the fit
  std::size_t samples = 0;
};

/// Least-squares fit of ln(amp) = intercept - lambda * xi over the samples
/// whose amplitude lies in [lo, hi]. The selected samples must be at least
/// `min_samples` long and strictly decreasing in amplitude; otherwise
/// NumericError is thrown.
TailFit fit_exponential_tail(std::span<const double> xi, std::span<const double> amp,
                             const FitWindow& window = {});

}  // namespace frontlab
