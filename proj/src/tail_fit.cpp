#include "frontlab/tail_fit.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "frontlab/errors.hpp"

namespace frontlab {

TailFit fit_exponential_tail(std::span<const double> xi, std::span<const double> amp,
                             const FitWindow& window) {
  if (xi.size() != amp.size()) throw DimensionError("tail fit: xi and amplitude lengths differ");
  if (!(window.lo > 0.0) || !(window.hi > window.lo))
    throw ConfigError("tail fit: window needs 0 < lo < hi");

  std::vector<double> x, y;
  double prev = 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const double a = std::abs(amp[i]);
    if (a < window.lo || a > window.hi) continue;
    if (!x.empty() && !(a < prev)) throw NumericError("tail fit: amplitude is not monotone in the window");
    x.push_back(xi[i]);
    y.push_back(std::log(a));
    prev = a;
  }
  if (x.size() < window.min_samples) {
    std::ostringstream os;
    os << "tail fit: " << x.size() << " samples in the window, need " << window.min_samples;
    throw NumericError(os.str());
  }

  // Center the abscissa before forming the normal equations.
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  TailFit fit;
  fit.lambda = -slope;
  fit.intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + slope * x[i]);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  fit.samples = x.size();
  return fit;
}

}  // namespace frontlab
