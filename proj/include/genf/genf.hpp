#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "genf/coeffs.hpp"
#include "genf/specialfn.hpp"

namespace genf {

using specialfn::SeriesEvaluation;

// Whether equal weights (relative 1e-12) are merged by summing their dofs.
// Merging is the production default; keeping duplicates distinct exists for
// term-count studies where the unmerged parameterization is the object of
// interest (the distribution itself is identical either way).
enum class MergePolicy { kMergeEqual, kKeepDistinct };

// The generalized F distribution of W = (sum_i alpha_i X_i / |m|) / (V / nu)
// with X_i ~ chi^2(m_i) and V ~ chi^2(nu) independent: pdf, cdf, survival,
// quantile, and the truncation-error bounds that drive adaptive term counts.
//
// Construction canonicalizes: weights sorted nonincreasing (dofs carried
// along), equal weights merged per policy, derived constants precomputed.
// A constructed object is immutable from the caller's view; concurrent
// evaluations are safe (the coefficient cache extends under its own lock).
class GeneralizedF {
public:
  GeneralizedF(std::vector<double> alphas, std::vector<double> ms, double nu,
               MergePolicy policy = MergePolicy::kMergeEqual);

  // Canonical (sorted/merged) weight configuration used by the series.
  const coeffs::WeightConfig& weights() const { return canonical_; }
  // Sorted but unmerged configuration as supplied (drives stochastic_bounds).
  const coeffs::WeightConfig& original_weights() const { return original_; }
  double nu() const { return nu_; }
  double m_total() const { return m_total_; }
  // Scale constant a = nu * alpha_r / |m|.
  double scale_a() const { return a_; }
  // t(y) = y / (a + y), the series argument.
  double t_of(double y) const;
  // True when the canonical form has a single weight: W = alpha * F(|m|, nu).
  bool is_central() const { return canonical_.alphas.size() == 1; }

  // Density at w >= 0 (w > 0 required when |m| < 2, where it diverges).
  // Adaptive: the smallest truncation with pdf_error_bound <= tol.  Default
  // tolerance w * 1e-4.  Term cap 10000 reported via converged = false.
  SeriesEvaluation pdf_series(double w) const;
  SeriesEvaluation pdf_series(double w, double tol) const;

  // Rigorous bound on the pdf truncation error after summing terms 0..tau.
  double pdf_error_bound(double w, std::size_t tau) const;

  // Smallest tau whose global (w-independent) truncation-error bound
  // (|m| / (alpha_r (|m| + 2(tau+1)))) * (1 - S_tau) drops to tol.  Only
  // meaningful for |m| >= 2; throws ConvergenceError past the term cap.
  std::size_t global_tau(double tol) const;

  // Closed-form density for canonical r = 2 via a single 2F1 evaluation.
  double pdf_exact_r2(double w) const;

  // cdf at y >= 0, always via the enhanced estimate: truncated series plus
  // a closed-form tail completion, leaving the residual below
  // cdf_error_bound.  Value clamped to [0, 1].  Default tolerance 1e-4.
  SeriesEvaluation cdf_series(double y, double tol = kDefaultTol) const;

  // Rigorous bound on the enhanced-estimate residual after truncation tau.
  double cdf_error_bound(double y, std::size_t tau) const;

  // Fixed-truncation evaluators for validating the error bounds against a
  // high-truncation reference: the plain pdf partial sum through term tau,
  // and the enhanced (tail-completed) cdf estimate at truncation tau.
  double pdf_partial_sum(double w, std::size_t tau) const;
  double cdf_enhanced(double y, std::size_t tau) const;

  // 1 - cdf, same error bound, clamped to [0, 1].
  SeriesEvaluation survival(double y, double tol = kDefaultTol) const;

  // y with |cdf(y) - prob| <= tol, by bracket-doubling from [0, a] then
  // bisection.  Monotone in prob.
  double quantile(double prob, double tol = 1e-8) const;

  // Screening interval (lower_p, upper_p) for P[W > y] when all dofs are 1:
  // the survival function is sandwiched between scaled central F tails at
  // the largest weight and at the geometric-mean weight.  Uses the original
  // (unmerged) weights; errors if any dof differs from 1.
  std::pair<double, double> stochastic_bounds(double y) const;

  static constexpr double kDefaultTol = 1e-4;
  static constexpr std::size_t kTermCap = 10000;

private:
  struct SeriesGeometry;  // per-evaluation constants (t, log prefactors)

  SeriesGeometry geometry(double y) const;
  double pdf_bound_from(const SeriesGeometry& g, std::size_t tau) const;

  coeffs::WeightConfig original_;
  coeffs::WeightConfig canonical_;
  double nu_ = 0.0;
  double m_total_ = 0.0;
  double a_ = 0.0;
  double log_b0_ = 0.0;
  coeffs::CoefficientCache cache_;
};

// Factory matching the constructor; validates and canonicalizes.
GeneralizedF new_generalized_f(std::vector<double> alphas,
                               std::vector<double> ms, double nu,
                               MergePolicy policy = MergePolicy::kMergeEqual);

}  // namespace genf
