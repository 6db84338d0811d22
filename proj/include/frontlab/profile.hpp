#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace frontlab {

/// Uniform grid on [xi_min, xi_max] with n >= 16 points.
class Grid {
 public:
  Grid(double xi_min, double xi_max, std::size_t n);

  double xi_min() const { return xi_min_; }
  double xi_max() const { return xi_max_; }
  std::size_t n() const { return n_; }
  double h() const { return h_; }
  double at(std::size_t i) const { return xi_min_ + static_cast<double>(i) * h_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double xi_min_;
  double xi_max_;
  std::size_t n_;
  double h_;
};

/// Sampled xi -> w(xi) in R^d, stored row-major (n x d).
class Profile {
 public:
  Profile(Grid grid, std::size_t d);
  Profile(Grid grid, std::size_t d, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::size_t dim() const { return d_; }
  std::size_t size() const { return grid_.n(); }

  std::span<double> at(std::size_t i) { return {values_.data() + i * d_, d_}; }
  std::span<const double> at(std::size_t i) const { return {values_.data() + i * d_, d_}; }
  double norm_at(std::size_t i) const;

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool finite() const;
  /// |w(xi_max)| <= tol, the truncated-domain stand-in for decay in H^1_c.
  bool decays_at_right(double tol) const { return norm_at(size() - 1) <= tol; }

  friend bool operator==(const Profile&, const Profile&) = default;

 private:
  Grid grid_;
  std::size_t d_;
  std::vector<double> values_;
};

}  // namespace frontlab
