#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "genf/linalg.hpp"

namespace genf::diagnostics {

// Ingestion options for a numeric CSV: header row presence, which column is
// the response (1-based index, or empty string meaning the last column;
// a column name when a header is present), and intercept handling.
struct CsvOptions {
  bool header = false;
  std::string response;      // "" -> last column; else name or 1-based index
  bool add_intercept = true;
};

// A validated regression dataset: design X0 (intercept first when added),
// response y0, and 1-based observation labels.
struct RegressionData {
  linalg::Matrix x0;        // N x k, full rank
  std::vector<double> y0;   // N
  std::size_t n = 0;
  std::size_t k = 0;        // includes the intercept when added
};

RegressionData load_csv(const std::string& path, const CsvOptions& options);

// Builds RegressionData from in-memory rows (each row: predictors then
// response per `options.response`); shared by load_csv and tests.
RegressionData from_rows(const std::vector<std::vector<double>>& rows,
                         const CsvOptions& options,
                         const std::vector<std::string>& names = {});

// Influence report for one deletion subset I.
struct SubsetReport {
  std::vector<std::size_t> indices;   // sorted, 1-based
  std::vector<double> leverages;      // nonincreasing, in (0,1)
  double d_stat = 0.0;
  double nu = 0.0;                    // N - r - k
  double p_lower = 0.0;
  double p_upper = 0.0;
  std::optional<double> p_exact;      // present once computed
  double p_error_bound = 0.0;
  bool converged = true;
};

// Eigenvalues of Z (X0'X0)^{-1} Z' for the deleted rows Z indexed by I;
// nonincreasing, all in (0,1) when the retained design keeps full rank.
// Requires |I| < k.
std::vector<double> canonical_leverages(const RegressionData& data,
                                        const std::vector<std::size_t>& I);

// The joint influence statistic for deleting the rows in I:
//   D_I = (beta_I - beta)' X'X (beta_I - beta) / (r * s_I^2)
// with X the retained rows, beta_I the retained-rows fit, and
// s_I^2 = rss(retained) / (N - r - k).  Returns (D_I, nu = N - r - k).
struct CookD {
  double d_stat = 0.0;
  double nu = 0.0;
};
CookD cook_d(const RegressionData& data, const std::vector<std::size_t>& I);

// Full report: leverages, D_I, screening bounds, and the exact p-value
// P[W > D_I] under the weighted-chi-square-ratio law with unit dofs.
SubsetReport subset_p_value(const RegressionData& data,
                            const std::vector<std::size_t>& I, double tol);

// Enumerates all C(N, r) subsets, screens each by its cheap lower bound
// (retained iff p_lower <= level), computes exact p only for retained
// subsets, and returns them sorted by p_exact ascending.  Errors when
// C(N, r) exceeds the combinatorial cap.
std::vector<SubsetReport> screen_subsets(const RegressionData& data,
                                         std::size_t r, double level,
                                         double tol,
                                         std::size_t cap = 1000000);

// Two-sided t(N-1-k) p-value of the externally studentized residual of
// observation i (1-based).
double rstudent_p_value(const RegressionData& data, std::size_t i);

}  // namespace genf::diagnostics
