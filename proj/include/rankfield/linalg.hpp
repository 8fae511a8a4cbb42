#pragma once

#include <cstddef>
#include <vector>

namespace rankfield {

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  bool operator==(const Matrix&) const = default;
};

struct SymmetricEigen {
  std::vector<double> values;  ///< non-increasing
  Matrix vectors;              ///< column k is the unit eigenvector of values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Sweeps visit
/// (p, q) pairs in row order; the result is deterministic. Ties in the
/// eigenvalue ordering keep the original column order.
SymmetricEigen jacobi_eigen(const Matrix& symmetric, int max_sweeps = 100);

}  // namespace rankfield
