#pragma once

#include <cstddef>

#include "genf/errors.hpp"

namespace genf::specialfn {

// Result of an adaptive series evaluation: the value, how many terms were
// used, a rigorous (or conservatively estimated) bound on the truncation
// error, and whether that bound met the requested tolerance within the cap.
struct SeriesEvaluation {
  double value = 0.0;
  std::size_t tau_used = 0;
  double error_bound = 0.0;
  bool converged = false;
};

// Compensated (Kahan) accumulator; keeps long series sums near 1 ulp.
class KahanSum {
public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// log Gamma(x) for x > 0.  Stirling series with upward shift for small x;
// relative error below 1e-13 across (0, 1e6).
double log_gamma(double x);

// Regularized incomplete beta I_x(a, b) for a, b > 0, x in [0, 1].
// Continued-fraction evaluation with the symmetry switch at
// x = (a + 1) / (a + b + 2); absolute error below 1e-12.
double reg_inc_beta(double a, double b, double x);

// Central F density, cdf, survival, quantile with d1, d2 > 0 degrees of
// freedom.  The survival function is computed directly from the
// complementary incomplete beta for full tail accuracy.
double central_f_pdf(double w, double d1, double d2);
double central_f_cdf(double w, double d1, double d2);
double central_f_sf(double w, double d1, double d2);
double central_f_quantile(double p, double d1, double d2);

// Student-t cdf with nu > 0 degrees of freedom.
double student_t_cdf(double t, double nu);

// Gauss hypergeometric series parameters for 2F1(a, b; c; t) with t in
// [0, 1).  All uses here have positive parameters and b = 1, so the series
// has positive terms and a geometric tail.
struct HypergeometricArgs {
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
  double t = 0.0;
};

// Evaluates 2F1 by direct summation with compensated accumulation; stops
// when a geometric bound on the remaining tail drops below `tol` relative
// to the accumulated sum.  Throws ConvergenceError if the term cap is hit.
SeriesEvaluation gauss_2f1(const HypergeometricArgs& args, double tol = 1e-14,
                           std::size_t max_terms = 100000);

// log of the Pochhammer ratio (p)_j / (q)_j, computed as a sum of log
// ratios so nearby p and q cancel without overflow.  Exactly 0 for j = 0
// or p == q.
double pochhammer_log_ratio(double p, double q, std::size_t j);

}  // namespace genf::specialfn
