#include "genf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "genf/genf.hpp"
#include "genf/specialfn.hpp"

namespace genf::diagnostics {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    fields.push_back(first == std::string::npos
                         ? std::string()
                         : field.substr(first, last - first + 1));
  }
  return fields;
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

// Resolve the response column (0-based) from the option string: empty means
// the last column, digits mean a 1-based position, anything else is looked
// up among header names.
std::size_t response_column(const CsvOptions& options, std::size_t ncols,
                            const std::vector<std::string>& names) {
  if (options.response.empty()) return ncols - 1;
  const bool numeric = std::all_of(options.response.begin(),
                                   options.response.end(),
                                   [](unsigned char c) { return std::isdigit(c); });
  if (numeric) {
    const std::size_t pos = std::stoul(options.response);
    if (pos < 1 || pos > ncols) {
      throw DomainError("response column " + options.response +
                        " out of range 1.." + std::to_string(ncols));
    }
    return pos - 1;
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == options.response) return i;
  }
  throw DomainError("response column '" + options.response +
                    "' not found in header");
}

}  // namespace

RegressionData from_rows(const std::vector<std::vector<double>>& rows,
                         const CsvOptions& options,
                         const std::vector<std::string>& names) {
  if (rows.empty()) {
    throw DomainError("regression data: no observations");
  }
  const std::size_t ncols = rows.front().size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != ncols) {
      throw DomainError("regression data: row " + std::to_string(i + 1) +
                        " has " + std::to_string(rows[i].size()) +
                        " fields, expected " + std::to_string(ncols));
    }
  }
  const std::size_t resp = response_column(options, ncols, names);

  RegressionData data;
  data.n = rows.size();
  const std::size_t predictors = ncols - 1;
  data.k = predictors + (options.add_intercept ? 1 : 0);
  if (data.k < 1) {
    throw DomainError("regression data: design has no columns");
  }
  if (data.n <= data.k) {
    throw DomainError("regression data: need N > k, got N = " +
                      std::to_string(data.n) +
                      ", k = " + std::to_string(data.k));
  }
  data.x0 = linalg::Matrix(data.n, data.k);
  data.y0.resize(data.n);
  for (std::size_t i = 0; i < data.n; ++i) {
    std::size_t col = 0;
    if (options.add_intercept) data.x0(i, col++) = 1.0;
    for (std::size_t j = 0; j < ncols; ++j) {
      if (j == resp) continue;
      data.x0(i, col++) = rows[i][j];
    }
    data.y0[i] = rows[i][resp];
  }
  // Full-rank check: the Gram matrix must admit a Cholesky factorization.
  linalg::Matrix gram(data.k, data.k);
  for (std::size_t i = 0; i < data.k; ++i) {
    for (std::size_t j = i; j < data.k; ++j) {
      double sum = 0.0;
      for (std::size_t row = 0; row < data.n; ++row) {
        sum += data.x0(row, i) * data.x0(row, j);
      }
      gram(i, j) = sum;
      gram(j, i) = sum;
    }
  }
  try {
    linalg::cholesky(gram);
  } catch (const DomainError&) {
    throw DomainError("regression data: design matrix is rank deficient");
  }
  return data;
}

RegressionData load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) {
    throw DomainError("load_csv: cannot open '" + path + "'");
  }
  std::vector<std::vector<double>> rows;
  std::vector<std::string> names;
  std::string line;
  std::size_t lineno = 0;
  bool header_pending = options.header;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (header_pending) {
      names = fields;
      header_pending = false;
      continue;
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(fields[j], &used));
        if (used != fields[j].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw DomainError("load_csv: " + path + ":" + std::to_string(lineno) +
                          ": field " + std::to_string(j + 1) + " ('" +
                          fields[j] + "') is not numeric");
      }
    }
    rows.push_back(std::move(row));
  }
  return from_rows(rows, options, names);
}

namespace {

// Validated sorted copy of a 1-based index set.
std::vector<std::size_t> checked_indices(const RegressionData& data,
                                         const std::vector<std::size_t>& I,
                                         bool require_strict_subset) {
  if (I.empty()) {
    throw DomainError("subset: index set must be nonempty");
  }
  std::vector<std::size_t> sorted = I;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError("subset: indices must be distinct");
  }
  if (sorted.front() < 1 || sorted.back() > data.n) {
    throw DomainError("subset: indices must lie in 1.." +
                      std::to_string(data.n));
  }
  if (require_strict_subset && sorted.size() >= data.k) {
    throw DomainError("subset: size must be smaller than the column count k=" +
                      std::to_string(data.k));
  }
  return sorted;
}

linalg::Matrix gram_of(const RegressionData& data) {
  linalg::Matrix gram(data.k, data.k);
  for (std::size_t i = 0; i < data.k; ++i) {
    for (std::size_t j = i; j < data.k; ++j) {
      double sum = 0.0;
      for (std::size_t row = 0; row < data.n; ++row) {
        sum += data.x0(row, i) * data.x0(row, j);
      }
      gram(i, j) = sum;
      gram(j, i) = sum;
    }
  }
  return gram;
}

// Retained design and response after deleting the (sorted, 1-based) rows.
void split_rows(const RegressionData& data,
                const std::vector<std::size_t>& sorted, linalg::Matrix& xr,
                std::vector<double>& yr) {
  const std::size_t r = sorted.size();
  xr = linalg::Matrix(data.n - r, data.k);
  yr.assign(data.n - r, 0.0);
  std::size_t out = 0;
  std::size_t next = 0;
  for (std::size_t row = 0; row < data.n; ++row) {
    if (next < r && row + 1 == sorted[next]) {
      ++next;
      continue;
    }
    for (std::size_t j = 0; j < data.k; ++j) xr(out, j) = data.x0(row, j);
    yr[out] = data.y0[row];
    ++out;
  }
}

}  // namespace

std::vector<double> canonical_leverages(const RegressionData& data,
                                        const std::vector<std::size_t>& I) {
  const std::vector<std::size_t> sorted =
      checked_indices(data, I, /*require_strict_subset=*/true);
  const std::size_t r = sorted.size();
  const linalg::Matrix l = linalg::cholesky(gram_of(data));
  // M = Z (X0'X0)^{-1} Z' with Z the deleted rows: solve per deleted row,
  // then take inner products against the deleted rows.
  std::vector<std::vector<double>> solved(r);
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<double> zi(data.k);
    for (std::size_t j = 0; j < data.k; ++j) {
      zi[j] = data.x0(sorted[i] - 1, j);
    }
    solved[i] = linalg::solve_with_factor(l, zi);
  }
  linalg::Matrix m(r, r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      double sum = 0.0;
      for (std::size_t col = 0; col < data.k; ++col) {
        sum += data.x0(sorted[i] - 1, col) * solved[j][col];
      }
      m(i, j) = sum;
    }
  }
  // Symmetrize rounding noise before the eigensolve.
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i + 1; j < r; ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  std::vector<double> eig = linalg::sym_eigenvalues(std::move(m));
  for (double lambda : eig) {
    if (!(lambda > 0.0)) {
      throw DomainError("canonical_leverages: nonpositive leverage; the "
                        "design row block is numerically degenerate");
    }
    if (!(lambda < 1.0)) {
      throw DomainError("canonical_leverages: leverage reached 1; deleting "
                        "these rows leaves a rank-deficient retained design");
    }
  }
  return eig;
}

CookD cook_d(const RegressionData& data, const std::vector<std::size_t>& I) {
  const std::vector<std::size_t> sorted =
      checked_indices(data, I, /*require_strict_subset=*/true);
  const std::size_t r = sorted.size();
  if (data.n < r + data.k + 1) {
    throw DomainError("cook_d: need N - r - k >= 1");
  }
  const linalg::LeastSquares full = linalg::least_squares(data.x0, data.y0);

  linalg::Matrix xr;
  std::vector<double> yr;
  split_rows(data, sorted, xr, yr);
  const linalg::LeastSquares retained = linalg::least_squares(xr, yr);

  const double nu = static_cast<double>(data.n - r - data.k);
  const double s2 = retained.rss / nu;
  if (!(s2 > 0.0)) {
    throw DomainError("cook_d: retained fit is exact; scale estimate is 0");
  }
  // Quadratic form (beta_I - beta)' Xr'Xr (beta_I - beta) via the fitted
  // differences on the retained rows.
  double quad = 0.0;
  for (std::size_t row = 0; row < xr.rows(); ++row) {
    double diff = 0.0;
    for (std::size_t j = 0; j < data.k; ++j) {
      diff += xr(row, j) * (retained.beta[j] - full.beta[j]);
    }
    quad += diff * diff;
  }
  return {quad / (static_cast<double>(r) * s2), nu};
}

SubsetReport subset_p_value(const RegressionData& data,
                            const std::vector<std::size_t>& I, double tol) {
  SubsetReport report;
  report.indices = checked_indices(data, I, /*require_strict_subset=*/true);
  report.leverages = canonical_leverages(data, report.indices);
  const CookD cook = cook_d(data, report.indices);
  report.d_stat = cook.d_stat;
  report.nu = cook.nu;

  const std::vector<double> unit(report.leverages.size(), 1.0);
  const GeneralizedF dist(report.leverages, unit, cook.nu);
  const auto [lower, upper] = dist.stochastic_bounds(cook.d_stat);
  report.p_lower = lower;
  report.p_upper = upper;
  const SeriesEvaluation sf = dist.survival(cook.d_stat, tol);
  report.p_exact = sf.value;
  report.p_error_bound = sf.error_bound;
  report.converged = sf.converged;
  return report;
}

namespace {

double binomial_count(std::size_t n, std::size_t r) {
  double c = 1.0;
  for (std::size_t i = 0; i < r; ++i) {
    c *= static_cast<double>(n - i) / static_cast<double>(i + 1);
  }
  return c;
}

}  // namespace

std::vector<SubsetReport> screen_subsets(const RegressionData& data,
                                         std::size_t r, double level,
                                         double tol, std::size_t cap) {
  if (r < 1 || r >= data.k) {
    throw DomainError("screen_subsets: need 1 <= r < k");
  }
  if (!(level >= 0.0) || !(level <= 1.0)) {
    throw DomainError("screen_subsets: level must lie in [0, 1]");
  }
  if (binomial_count(data.n, r) > static_cast<double>(cap)) {
    throw DomainError(
        "screen_subsets: C(N, r) exceeds the enumeration cap; evaluate "
        "explicit subsets instead");
  }

  std::vector<SubsetReport> retained;
  std::vector<std::size_t> subset(r);
  for (std::size_t i = 0; i < r; ++i) subset[i] = i + 1;
  while (true) {
    // Cheap screen first: leverages + D + bounds; exact p only if retained.
    std::vector<double> lev = canonical_leverages(data, subset);
    const CookD cook = cook_d(data, subset);
    const std::vector<double> unit(lev.size(), 1.0);
    const GeneralizedF dist(lev, unit, cook.nu);
    const auto [lower, upper] = dist.stochastic_bounds(cook.d_stat);
    if (lower <= level) {
      SubsetReport report;
      report.indices = subset;
      report.leverages = std::move(lev);
      report.d_stat = cook.d_stat;
      report.nu = cook.nu;
      report.p_lower = lower;
      report.p_upper = upper;
      const SeriesEvaluation sf = dist.survival(cook.d_stat, tol);
      report.p_exact = sf.value;
      report.p_error_bound = sf.error_bound;
      report.converged = sf.converged;
      retained.push_back(std::move(report));
    }
    // Advance to the next combination in lexicographic order.
    std::size_t pos = r;
    while (pos > 0 && subset[pos - 1] == data.n - (r - pos)) --pos;
    if (pos == 0) break;
    ++subset[pos - 1];
    for (std::size_t i = pos; i < r; ++i) subset[i] = subset[i - 1] + 1;
  }
  std::sort(retained.begin(), retained.end(),
            [](const SubsetReport& a, const SubsetReport& b) {
              if (*a.p_exact != *b.p_exact) return *a.p_exact < *b.p_exact;
              return a.indices < b.indices;
            });
  return retained;
}

double rstudent_p_value(const RegressionData& data, std::size_t i) {
  const std::vector<std::size_t> sorted =
      checked_indices(data, {i}, /*require_strict_subset=*/false);
  if (data.n < data.k + 2) {
    throw DomainError("rstudent_p_value: need N - 1 - k >= 1");
  }
  const linalg::LeastSquares full = linalg::least_squares(data.x0, data.y0);
  const linalg::Matrix l = linalg::cholesky(gram_of(data));
  std::vector<double> xi(data.k);
  for (std::size_t j = 0; j < data.k; ++j) xi[j] = data.x0(i - 1, j);
  const std::vector<double> solved = linalg::solve_with_factor(l, xi);
  double h = 0.0;
  for (std::size_t j = 0; j < data.k; ++j) h += xi[j] * solved[j];
  if (!(h < 1.0)) {
    throw DomainError("rstudent_p_value: leverage of observation " +
                      std::to_string(i) + " is 1; residual is degenerate");
  }
  double fitted = 0.0;
  for (std::size_t j = 0; j < data.k; ++j) fitted += xi[j] * full.beta[j];
  const double resid = data.y0[i - 1] - fitted;

  linalg::Matrix xr;
  std::vector<double> yr;
  split_rows(data, sorted, xr, yr);
  const linalg::LeastSquares retained = linalg::least_squares(xr, yr);
  const double nu = static_cast<double>(data.n - 1 - data.k);
  const double s2 = retained.rss / nu;
  if (!(s2 > 0.0)) {
    throw DomainError("rstudent_p_value: deleted-point fit is exact");
  }
  const double tstat = resid / std::sqrt(s2 * (1.0 - h));
  return 2.0 * (1.0 - specialfn::student_t_cdf(std::fabs(tstat), nu));
}

}  // namespace genf::diagnostics
