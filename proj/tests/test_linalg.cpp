#include <cmath>
#include <cstddef>
#include <vector>

#include <doctest.h>

#include "genf/errors.hpp"
#include "genf/linalg.hpp"

using namespace genf;
using namespace genf::linalg;

namespace {

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace

TEST_CASE("matrix basics: identity, symmetry, frobenius") {
  const Matrix eye = Matrix::identity(3);
  CHECK(eye(0, 0) == 1.0);
  CHECK(eye(1, 0) == 0.0);
  CHECK(eye.is_symmetric());
  CHECK(eye.frobenius() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));

  const Matrix m = from_rows({{3.0, 4.0}});
  CHECK(m.frobenius() == doctest::Approx(5.0).epsilon(1e-15));
  CHECK_FALSE(from_rows({{1.0, 2.0}, {3.0, 4.0}}).is_symmetric());
  CHECK(from_rows({{1.0, 2.0}, {2.0, 5.0}}).is_symmetric());
}

TEST_CASE("matmul and transpose compose correctly") {
  const Matrix a = from_rows({{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}});
  const Matrix b = from_rows({{7.0, 8.0}, {9.0, 10.0}});
  const Matrix ab = matmul(a, b);
  REQUIRE(ab.rows() == 3);
  REQUIRE(ab.cols() == 2);
  CHECK(ab(0, 0) == doctest::Approx(25.0));
  CHECK(ab(2, 1) == doctest::Approx(100.0));

  const Matrix at = transpose(a);
  CHECK(at.rows() == 2);
  CHECK(at.cols() == 3);
  CHECK(at(1, 2) == 6.0);

  CHECK_THROWS_AS(matmul(b, a), DomainError);
}

TEST_CASE("cholesky factors SPD matrices and rejects the rest") {
  const Matrix a = from_rows({{4.0, 2.0}, {2.0, 3.0}});
  const Matrix l = cholesky(a);
  CHECK(l(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(l(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(l(0, 1) == 0.0);
  CHECK(l(1, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  const Matrix product = matmul(l, transpose(l));
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(product(i, j) == doctest::Approx(a(i, j)).epsilon(1e-14));
    }
  }

  CHECK_THROWS_AS(cholesky(from_rows({{1.0, 2.0}, {2.0, 1.0}})), DomainError);
  CHECK_THROWS_AS(cholesky(from_rows({{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}})),
                  DomainError);
}

TEST_CASE("solve_spd reproduces the right-hand side") {
  const Matrix a = from_rows({{6.0, 2.0, 1.0}, {2.0, 5.0, 2.0}, {1.0, 2.0, 4.0}});
  const std::vector<double> b = {1.0, -2.0, 3.0};
  const std::vector<double> x = solve_spd(a, b);
  for (std::size_t i = 0; i < 3; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < 3; ++j) acc += a(i, j) * x[j];
    CHECK(acc == doctest::Approx(b[i]).epsilon(1e-13));
  }
}

TEST_CASE("least_squares solves a known small problem") {
  const Matrix x = from_rows({{1.0, 0.0}, {1.0, 1.0}, {1.0, 2.0}});
  const LeastSquares fit = least_squares(x, {0.0, 1.0, 1.0});
  REQUIRE(fit.beta.size() == 2);
  CHECK(fit.beta[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  CHECK(fit.beta[1] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(fit.rss == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

  // Interpolating data leaves zero residual.
  const LeastSquares exact = least_squares(x, {2.0, 3.0, 4.0});
  CHECK(exact.beta[0] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(exact.beta[1] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::fabs(exact.rss) < 1e-24);

  CHECK_THROWS_AS(least_squares(x, {1.0, 2.0}), DomainError);
}

TEST_CASE("sym_eigenvalues matches closed forms, sorted nonincreasing") {
  Matrix diag(3, 3);
  diag(0, 0) = 3.0;
  diag(1, 1) = 1.0;
  diag(2, 2) = 2.0;
  const std::vector<double> d = sym_eigenvalues(diag);
  CHECK(d[0] == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(d[1] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(d[2] == doctest::Approx(1.0).epsilon(1e-13));

  const std::vector<double> pair =
      sym_eigenvalues(from_rows({{2.0, 1.0}, {1.0, 2.0}}));
  CHECK(pair[0] == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(pair[1] == doctest::Approx(1.0).epsilon(1e-13));

  const std::vector<double> tri = sym_eigenvalues(
      from_rows({{2.0, 1.0, 0.0}, {1.0, 2.0, 1.0}, {0.0, 1.0, 2.0}}));
  CHECK(tri[0] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-13));
  CHECK(tri[1] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(tri[2] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-13));

  CHECK_THROWS_AS(sym_eigenvalues(from_rows({{1.0, 2.0}, {0.5, 1.0}})),
                  DomainError);
}

TEST_CASE("pencil_eigenvalues solves the generalized symmetric problem") {
  // Diagonal pencil: eigenvalues are the elementwise ratios.
  Matrix sigma(2, 2);
  sigma(0, 0) = 2.0;
  sigma(1, 1) = 8.0;
  Matrix omega(2, 2);
  omega(0, 0) = 1.0;
  omega(1, 1) = 2.0;
  const std::vector<double> ratios = pencil_eigenvalues(sigma, omega);
  CHECK(ratios[0] == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(ratios[1] == doctest::Approx(2.0).epsilon(1e-13));

  // Identity target: the pencil spectrum is that of Omega^{-1}.
  const std::vector<double> inv =
      pencil_eigenvalues(Matrix::identity(2), from_rows({{2.0, 1.0}, {1.0, 2.0}}));
  CHECK(inv[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(inv[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

  CHECK_THROWS_AS(pencil_eigenvalues(Matrix::identity(3), Matrix::identity(2)),
                  DomainError);
}
