#include "genf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace genf::linalg {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool Matrix::is_symmetric(double tol) const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = i + 1; j < cols_; ++j) {
      if (std::fabs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    }
  }
  return true;
}

double Matrix::frobenius() const {
  double sum = 0.0;
  for (double v : data_) sum += v * v;
  return std::sqrt(sum);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DomainError("matmul: inner dimensions disagree");
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out(j, i) = a(i, j);
    }
  }
  return out;
}

Matrix cholesky(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DomainError("cholesky: matrix must be square");
  }
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0)) {
      throw DomainError(
          "cholesky: matrix is not positive definite (pivot " +
          std::to_string(j + 1) + " is " + std::to_string(diag) + ")");
    }
    l(j, j) = std::sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      double sum = a(i, j);
      for (std::size_t k = 0; k < j; ++k) sum -= l(i, k) * l(j, k);
      l(i, j) = sum / l(j, j);
    }
  }
  return l;
}

std::vector<double> solve_with_factor(const Matrix& l,
                                      const std::vector<double>& b) {
  const std::size_t n = l.rows();
  if (b.size() != n) {
    throw DomainError("solve_with_factor: dimension mismatch");
  }
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = b[i];
    for (std::size_t k = 0; k < i; ++k) sum -= l(i, k) * z[k];
    z[i] = sum / l(i, i);
  }
  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double sum = z[ii];
    for (std::size_t k = ii + 1; k < n; ++k) sum -= l(k, ii) * x[k];
    x[ii] = sum / l(ii, ii);
  }
  return x;
}

std::vector<double> solve_spd(const Matrix& a, const std::vector<double>& b) {
  return solve_with_factor(cholesky(a), b);
}

LeastSquares least_squares(const Matrix& x, const std::vector<double>& y) {
  const std::size_t n = x.rows();
  const std::size_t k = x.cols();
  if (y.size() != n) {
    throw DomainError("least_squares: response length must match row count");
  }
  if (n <= k) {
    throw DomainError("least_squares: need more observations than columns");
  }
  Matrix xtx(k, k);
  std::vector<double> xty(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      double sum = 0.0;
      for (std::size_t row = 0; row < n; ++row) sum += x(row, i) * x(row, j);
      xtx(i, j) = sum;
      xtx(j, i) = sum;
    }
    double sum = 0.0;
    for (std::size_t row = 0; row < n; ++row) sum += x(row, i) * y[row];
    xty[i] = sum;
  }
  LeastSquares out;
  out.beta = solve_spd(xtx, xty);
  double rss = 0.0;
  for (std::size_t row = 0; row < n; ++row) {
    double fitted = 0.0;
    for (std::size_t j = 0; j < k; ++j) fitted += x(row, j) * out.beta[j];
    const double resid = y[row] - fitted;
    rss += resid * resid;
  }
  out.rss = rss;
  return out;
}

namespace {

double offdiagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      sum += 2.0 * a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

// One Jacobi rotation zeroing a(p, q), applied symmetrically in place.
void rotate(Matrix& a, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
}

}  // namespace

std::vector<double> sym_eigenvalues(Matrix a) {
  if (!a.is_symmetric(1e-12 * std::max(1.0, a.frobenius()))) {
    throw DomainError("sym_eigenvalues: matrix must be symmetric");
  }
  const std::size_t n = a.rows();
  // Symmetrize exactly so rotations preserve symmetry bit-for-bit.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  const double scale = std::max(a.frobenius(), 1e-300);
  constexpr int kMaxSweeps = 50;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (offdiagonal_norm(a) <= 1e-12 * scale) {
      std::vector<double> eig(n);
      for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
      std::sort(eig.begin(), eig.end(), std::greater<>());
      return eig;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::fabs(a(p, q)) > 1e-300) rotate(a, p, q);
      }
    }
  }
  if (offdiagonal_norm(a) <= 1e-12 * scale) {
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end(), std::greater<>());
    return eig;
  }
  throw ConvergenceError("sym_eigenvalues: Jacobi exceeded 50 sweeps");
}

std::vector<double> pencil_eigenvalues(const Matrix& sigma,
                                       const Matrix& omega) {
  if (sigma.rows() != omega.rows() || sigma.cols() != omega.cols()) {
    throw DomainError("pencil_eigenvalues: orders disagree");
  }
  const std::size_t n = sigma.rows();
  const Matrix l = cholesky(omega);
  // Form B = L^{-1} Sigma L^{-T} column by column:
  // first Y = L^{-1} Sigma (forward substitution on each column of Sigma),
  // then B = (L^{-1} Y')' computed the same way on rows.
  Matrix y(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      double sum = sigma(i, col);
      for (std::size_t k = 0; k < i; ++k) sum -= l(i, k) * y(k, col);
      y(i, col) = sum / l(i, i);
    }
  }
  Matrix b(n, n);
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t i = 0; i < n; ++i) {
      double sum = y(row, i);
      for (std::size_t k = 0; k < i; ++k) sum -= l(i, k) * b(row, k);
      b(row, i) = sum / l(i, i);
    }
  }
  return sym_eigenvalues(std::move(b));
}

}  // namespace genf::linalg
