#include "frontlab/profile.hpp"

#include <cmath>
#include <stdexcept>

namespace frontlab {

Grid::Grid(double xi_min, double xi_max, std::size_t n) : xi_min_(xi_min), xi_max_(xi_max), n_(n) {
  if (n < 16) throw std::invalid_argument("Grid requires at least 16 points");
  if (!(xi_max > xi_min)) throw std::invalid_argument("Grid requires xi_max > xi_min");
  h_ = (xi_max - xi_min) / static_cast<double>(n - 1);
}

Profile::Profile(Grid grid, std::size_t d) : grid_(grid), d_(d), values_(grid.n() * d, 0.0) {
  if (d == 0) throw std::invalid_argument("Profile requires d >= 1");
}

Profile::Profile(Grid grid, std::size_t d, std::vector<double> values)
    : grid_(grid), d_(d), values_(std::move(values)) {
  if (d == 0) throw std::invalid_argument("Profile requires d >= 1");
  if (values_.size() != grid_.n() * d_)
    throw std::invalid_argument("Profile values must have n x d entries");
}

double Profile::norm_at(std::size_t i) const {
  double s = 0.0;
  for (double x : at(i)) s += x * x;
  return std::sqrt(s);
}

bool Profile::finite() const {
  for (double x : values_)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace frontlab
