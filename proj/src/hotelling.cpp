#include "genf/hotelling.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "genf/errors.hpp"
#include "genf/specialfn.hpp"

namespace genf::hotelling {

linalg::Matrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DomainError("load_matrix_csv: cannot open '" + path + "'");
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        row.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw DomainError("load_matrix_csv: " + path + ":" +
                          std::to_string(lineno) + ": '" + field +
                          "' is not numeric");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw DomainError("load_matrix_csv: '" + path + "' is empty");
  }
  const std::size_t n = rows.size();
  linalg::Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw DomainError("load_matrix_csv: '" + path + "' is not square (row " +
                        std::to_string(i + 1) + " has " +
                        std::to_string(rows[i].size()) + " of " +
                        std::to_string(n) + " fields)");
    }
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

linalg::Matrix equicorrelated(std::size_t p, double rho) {
  if (p < 1) {
    throw DomainError("equicorrelated: dimension must be at least 1");
  }
  if (p >= 2) {
    const double lower = -1.0 / static_cast<double>(p - 1);
    if (!(rho > lower) || !(rho < 1.0)) {
      throw DomainError("equicorrelated: rho must lie in (" +
                        std::to_string(lower) +
                        ", 1) for positive definiteness");
    }
  }
  linalg::Matrix m(p, p, rho);
  for (std::size_t i = 0; i < p; ++i) m(i, i) = 1.0;
  return m;
}

HotellingScenario make_scenario(linalg::Matrix sigma, linalg::Matrix omega,
                                std::size_t n_obs) {
  if (sigma.rows() != sigma.cols() || omega.rows() != omega.cols() ||
      sigma.rows() != omega.rows()) {
    throw DomainError("scenario: Sigma and Omega must be square, same order");
  }
  const std::size_t p = sigma.rows();
  if (n_obs <= p) {
    throw DomainError("scenario: need sample size N > dimension p");
  }
  HotellingScenario s;
  s.pis = linalg::pencil_eigenvalues(sigma, omega);
  for (double pi : s.pis) {
    if (!(pi > 0.0)) {
      throw DomainError("scenario: Sigma must be positive definite");
    }
  }
  s.sigma = std::move(sigma);
  s.omega = std::move(omega);
  s.n_obs = n_obs;
  s.dim = p;
  s.nu = static_cast<double>(n_obs - p);
  return s;
}

SeriesEvaluation misspecified_tail(const HotellingScenario& scenario, double y,
                                   double tol) {
  const std::vector<double> unit(scenario.pis.size(), 1.0);
  const GeneralizedF dist(scenario.pis, unit, scenario.nu);
  return dist.survival(y, tol);
}

std::vector<Table1Row> table1(double tol_target) {
  if (!(tol_target > 0.0)) {
    throw DomainError("table1: tolerance target must be positive");
  }
  constexpr std::size_t kDim = 3;
  constexpr std::size_t kSample = 12;
  const double nu = static_cast<double>(kSample - kDim);
  const double y_exact =
      specialfn::central_f_quantile(0.95, static_cast<double>(kDim), nu);
  const double y = std::round(y_exact * 1e4) / 1e4;

  std::vector<Table1Row> rows;
  rows.reserve(10);
  const linalg::Matrix identity = linalg::Matrix::identity(kDim);
  for (int i = 0; i < 10; ++i) {
    const double rho = 0.1 * static_cast<double>(i);
    const linalg::Matrix omega = equicorrelated(kDim, rho);
    const std::vector<double> pis = linalg::pencil_eigenvalues(identity, omega);
    const std::vector<double> unit(pis.size(), 1.0);
    // Unmerged so duplicate roots stay separate series components for the
    // term-count columns; the tail itself is policy-independent.
    const GeneralizedF dist(pis, unit, nu, MergePolicy::kKeepDistinct);

    Table1Row row;
    row.rho = rho;
    row.tau1 = dist.global_tau(tol_target / y);
    row.tau2 = 0;
    while (y * dist.pdf_error_bound(y, row.tau2) > tol_target) {
      if (++row.tau2 > GeneralizedF::kTermCap) {
        throw ConvergenceError("table1: pdf bound did not reach target");
      }
    }
    row.tau3 = 0;
    while (dist.cdf_error_bound(y, row.tau3) > tol_target) {
      if (++row.tau3 > GeneralizedF::kTermCap) {
        throw ConvergenceError("table1: cdf bound did not reach target");
      }
    }
    row.tail = dist.survival(y, 1e-8).value;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace genf::hotelling
