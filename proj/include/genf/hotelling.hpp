#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "genf/genf.hpp"
#include "genf/linalg.hpp"

namespace genf::hotelling {

// Correlation matrix with unit diagonal and constant off-diagonal rho;
// positive definite iff -1/(p-1) < rho < 1.
linalg::Matrix equicorrelated(std::size_t p, double rho);

// Square numeric CSV (no header) -> matrix; errors carry line numbers.
linalg::Matrix load_matrix_csv(const std::string& path);

// A scale-misspecification scenario for the one-sample T^2 statistic: the
// data have true dispersion Sigma while the statistic assumes Omega.  The
// scaled statistic ((N-p)/p) T^2/(N-1) then follows the generalized F law
// with weights pi = eigenvalues of Omega^{-1/2} Sigma Omega^{-1/2}, unit
// numerator dofs, and denominator dof nu = N - p.
struct HotellingScenario {
  linalg::Matrix sigma;
  linalg::Matrix omega;
  std::size_t n_obs = 0;     // sample size N
  std::size_t dim = 0;       // dimension p
  std::vector<double> pis;   // misspecification roots, nonincreasing
  double nu = 0.0;           // N - p
};

HotellingScenario make_scenario(linalg::Matrix sigma, linalg::Matrix omega,
                                std::size_t n_obs);

// P[((N-p)/p) T^2/(N-1) >= y] under the scenario's true dispersion.
SeriesEvaluation misspecified_tail(const HotellingScenario& scenario, double y,
                                   double tol = GeneralizedF::kDefaultTol);

// One row of the misspecified type-I-error table: the attained size of the
// nominal-0.05 test when the assumed dispersion is equicorrelated(3, rho)
// but the data are white, together with the adaptive term counts required
// by the three truncation-error bounds at the 1e-4 target.
struct Table1Row {
  double rho = 0.0;
  std::size_t tau1 = 0;  // global bound:      y * e_tau      <= target
  std::size_t tau2 = 0;  // local pdf bound:   y * e_tau(y)   <= target
  std::size_t tau3 = 0;  // enhanced-cdf bound:    e*_tau(y)  <= target
  double tail = 0.0;
};

// The ten-row table for rho = 0.0, 0.1, ..., 0.9 with p = 3, N = 12 and
// the 0.95 central F(3, 9) critical value (recomputed, then rounded to four
// decimals per the table's input convention).  Term counts are computed on
// the unmerged parameterization so duplicate roots count as separate
// series components; the tail probability is identical either way.
std::vector<Table1Row> table1(double tol_target = 1e-4);

}  // namespace genf::hotelling
