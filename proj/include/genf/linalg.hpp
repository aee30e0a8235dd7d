#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "genf/errors.hpp"

namespace genf::linalg {

// Dense row-major matrix, small orders only (everything here is <= ~20).
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  bool is_symmetric(double tol = 0.0) const;
  double frobenius() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

// Lower-triangular L with L L' = A for symmetric positive definite A.
// Throws DomainError when a pivot fails (non-SPD / rank deficiency).
Matrix cholesky(const Matrix& a);

// Solves A x = b for SPD A via Cholesky forward/back substitution.
std::vector<double> solve_spd(const Matrix& a, const std::vector<double>& b);

// Forward/back substitution against a precomputed Cholesky factor.
std::vector<double> solve_with_factor(const Matrix& l,
                                      const std::vector<double>& b);

// Least squares via normal equations: beta = (X'X)^{-1} X'y and the
// residual sum of squares.  Rank deficiency surfaces as the Cholesky error.
struct LeastSquares {
  std::vector<double> beta;
  double rss = 0.0;
};
LeastSquares least_squares(const Matrix& x, const std::vector<double>& y);

// Eigenvalues of a symmetric matrix by cyclic-by-row Jacobi rotations,
// sorted nonincreasing.  Converges when the off-diagonal norm falls below
// 1e-12 * ||A||; throws ConvergenceError after 50 sweeps.
std::vector<double> sym_eigenvalues(Matrix a);

// Eigenvalues of the symmetric pencil (Sigma, Omega): the spectrum of
// L^{-1} Sigma L^{-T} with L L' = Omega, equal to that of
// Omega^{-1/2} Sigma Omega^{-1/2}.  Sorted nonincreasing.
std::vector<double> pencil_eigenvalues(const Matrix& sigma,
                                       const Matrix& omega);

}  // namespace genf::linalg
