#pragma once

#include <cstddef>
#include <mutex>
#include <vector>

#include "genf/errors.hpp"

namespace genf::coeffs {

// Weight/dof configuration for a nonnegative mixture expansion.  Weights
// must be positive and nonincreasing; dofs positive.  `canonical`
// constructs a validated copy (sorting weights descending, carrying dofs
// along) and optionally merges weights that agree to relative 1e-12 by
// summing their dofs.
struct WeightConfig {
  std::vector<double> alphas;  // nonincreasing, all > 0
  std::vector<double> ms;      // all > 0
};

WeightConfig canonical(std::vector<double> alphas, std::vector<double> ms,
                       bool merge_equal_weights = true);

// First `count` mixture coefficients c_0..c_{count-1}, their running
// partial sums S_j = sum_{i<=j} c_i, and the tail 1 - S_{count-1} (clamped
// at zero when rounding drives it to -eps with eps < 1e-14).
struct CoefficientTable {
  std::vector<double> c;
  std::vector<double> partial_sums;
  double tail = 1.0;
};

// Power-sum recursion: with d_j = sum_i (m_i/2) u_i^j and u_i = 1 -
// alpha_r/alpha_i, the coefficients satisfy j c_j = sum_{l<j} d_{j-l} c_l.
CoefficientTable coeffs_kjb(const WeightConfig& cfg, std::size_t count);

// Elementary symmetric polynomials e_1..e_n of the given values (e_0 = 1
// is omitted).  Plain O(n^2) expansion; n here is the number of distinct
// weights, which is small.
std::vector<double> sym_poly(const std::vector<double>& values);

// Symmetric-function recursion: k P_k = sum_i (-1)^{i-1} ((k-i) e_i + f_i)
// P_{k-i}, with f_i the dof-weighted elementary symmetric derivative and
// c_k = A P_k.  Production default; agrees termwise with coeffs_kjb.
CoefficientTable coeffs_symfun(const WeightConfig& cfg, std::size_t count);

// Incremental, mutex-guarded coefficient store.  Grows the table on demand
// so adaptive truncation loops can ask for one more coefficient without
// recomputing the prefix; safe for concurrent readers.
class CoefficientCache {
public:
  explicit CoefficientCache(WeightConfig cfg);

  const WeightConfig& config() const { return cfg_; }

  // c_j (extends the table as needed).
  double c(std::size_t j) const;
  // S_j = sum_{i<=j} c_i (extends the table as needed).
  double partial_sum(std::size_t j) const;
  // Leading normalization A = prod (alpha_i/alpha_r)^{-m_i/2} = c_0.
  double leading() const;

private:
  void ensure(std::size_t upto) const;  // callers hold mu_

  // The P_k recursion compounds rounding over hundreds of terms, so the
  // working state is kept in extended precision; only emitted values are
  // narrowed to double.
  WeightConfig cfg_;
  std::vector<double> u_;               // 1 - alpha_r/alpha_i
  std::vector<long double> e_;          // elementary symmetric polys of u_
  std::vector<long double> f_;          // dof-weighted companions
  double leading_ = 1.0;
  mutable std::vector<long double> p_;  // P_k sequence (c_k = leading_ * P_k)
  mutable std::vector<double> s_;       // partial sums of c
  mutable long double s_run_ = 0.0L;    // extended-precision running sum
  mutable std::mutex mu_;
};

}  // namespace genf::coeffs
