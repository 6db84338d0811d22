#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace frontlab {

/// Small dense row-major matrix. Sized for state dimensions d <= 8.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const { return data_; }

  Matrix transposed() const;
  std::vector<double> column(std::size_t j) const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

std::vector<double> operator*(const Matrix& a, std::span<const double> x);

double max_abs_diff(const Matrix& a, const Matrix& b);

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column j is the eigenvector of values[j]
  int sweeps = 0;
};

/// Cyclic Jacobi diagonalization of a symmetric matrix.
///
/// Sweeps stop once the off-diagonal Frobenius norm drops below
/// 1e-13 * max(1, ||H||_F). Eigenvalues are returned ascending; every
/// eigenvector has its first nonzero component positive, and ties are
/// ordered by descending lexicographic order of the eigenvectors so that a
/// diagonal input yields the canonical basis in index order.
///
/// Throws std::invalid_argument if H is not square or not symmetric to 1e-12.
SymmetricEigen symmetric_eigen(const Matrix& h);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace frontlab
