#include "genf/genf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "genf/errors.hpp"

namespace genf {

namespace {

using specialfn::HypergeometricArgs;
using specialfn::KahanSum;

double geometric_mean(const std::vector<double>& xs) {
  KahanSum acc;
  for (double x : xs) acc.add(std::log(x));
  return std::exp(acc.value() / static_cast<double>(xs.size()));
}

}  // namespace

GeneralizedF::GeneralizedF(std::vector<double> alphas, std::vector<double> ms,
                           double nu, MergePolicy policy)
    : original_(coeffs::canonical(alphas, ms, /*merge_equal_weights=*/false)),
      canonical_(policy == MergePolicy::kMergeEqual
                     ? coeffs::canonical(std::move(alphas), std::move(ms),
                                         /*merge_equal_weights=*/true)
                     : original_),
      nu_(nu),
      cache_(canonical_) {
  if (!(nu_ > 0.0) || !std::isfinite(nu_)) {
    throw DomainError("GeneralizedF: denominator dof nu must be positive");
  }
  KahanSum total;
  for (double m : canonical_.ms) total.add(m);
  m_total_ = total.value();
  a_ = nu_ * canonical_.alphas.back() / m_total_;
  log_b0_ = 0.5 * nu_ * std::log(a_) +
            specialfn::log_gamma(0.5 * (nu_ + m_total_)) -
            specialfn::log_gamma(0.5 * m_total_) -
            specialfn::log_gamma(0.5 * nu_);
}

GeneralizedF new_generalized_f(std::vector<double> alphas,
                               std::vector<double> ms, double nu,
                               MergePolicy policy) {
  return GeneralizedF(std::move(alphas), std::move(ms), nu, policy);
}

double GeneralizedF::t_of(double y) const {
  if (y < 0.0) {
    throw DomainError("GeneralizedF: evaluation point must be nonnegative");
  }
  return y / (a_ + y);
}

// Per-evaluation constants shared by the series, the enhanced completion,
// and both error bounds at a fixed argument y > 0.
struct GeneralizedF::SeriesGeometry {
  double t = 0.0;            // y / (a + y)
  double log_pdf_pref = 0.0; // log(B0 B1(y))
  double log_cdf_pref = 0.0; // log(B0 B1(y) y / (|m|/2))
  double a0 = 0.0;           // (nu + |m|)/2, numerator Pochhammer base
  double half_m = 0.0;       // |m|/2
};

GeneralizedF::SeriesGeometry GeneralizedF::geometry(double y) const {
  SeriesGeometry g;
  g.t = y / (a_ + y);
  g.a0 = 0.5 * (nu_ + m_total_);
  g.half_m = 0.5 * m_total_;
  const double log_b1 =
      (g.half_m - 1.0) * std::log(y) - g.a0 * std::log(a_ + y);
  g.log_pdf_pref = log_b0_ + log_b1;
  g.log_cdf_pref = g.log_pdf_pref + std::log(y) - std::log(g.half_m);
  return g;
}

SeriesEvaluation GeneralizedF::pdf_series(double w) const {
  return pdf_series(w, w > 0.0 ? w * kDefaultTol : kDefaultTol);
}

SeriesEvaluation GeneralizedF::pdf_series(double w, double tol) const {
  if (w < 0.0) {
    throw DomainError("pdf_series: argument must be nonnegative");
  }
  if (!(tol > 0.0)) {
    throw DomainError("pdf_series: tolerance must be positive");
  }
  if (w == 0.0) {
    if (m_total_ < 2.0) {
      throw DomainError("pdf_series: density diverges at 0 when |m| < 2");
    }
    if (m_total_ > 2.0) return {0.0, 0, 0.0, true};
    // |m| = 2: only the j = 0 term survives at t = 0.
    const double value =
        std::exp(log_b0_ - 0.5 * (nu_ + m_total_) * std::log(a_)) *
        cache_.leading();
    return {value, 0, 0.0, true};
  }
  if (is_central()) {
    const double alpha = canonical_.alphas.front();
    const double value =
        specialfn::central_f_pdf(w / alpha, m_total_, nu_) / alpha;
    const double bound = 1e-12 * std::max(value, 1.0);
    return {value, 0, bound, bound <= tol};
  }

  const SeriesGeometry g = geometry(w);
  const double pref = std::exp(g.log_pdf_pref);
  KahanSum sum;
  double term = 1.0;  // ((nu+|m|)/2)_j / ((|m|/2))_j * t^j at j = 0
  for (std::size_t j = 0; j <= kTermCap; ++j) {
    const double jd = static_cast<double>(j);
    sum.add(cache_.c(j) * term);
    const double next_term = term * g.t * (g.a0 + jd) / (g.half_m + jd);
    // Truncation bound after keeping terms 0..j: the first omitted term
    // times the closed-form geometric completion.
    const double completion =
        specialfn::gauss_2f1(
            {g.a0 + jd + 1.0, 1.0, g.half_m + jd + 2.0, g.t})
            .value;
    const double bound = cache_.c(j + 1) * pref * next_term * completion;
    if (bound <= tol) {
      return {pref * sum.value(), j, bound, true};
    }
    term = next_term;
    if (j == kTermCap) {
      return {pref * sum.value(), j, bound, false};
    }
  }
  return {};  // unreachable
}

double GeneralizedF::pdf_bound_from(const SeriesGeometry& g,
                                    std::size_t tau) const {
  const double taud = static_cast<double>(tau);
  const double log_term =
      specialfn::pochhammer_log_ratio(g.a0, g.half_m, tau + 1) +
      (taud + 1.0) * std::log(g.t);
  const double completion =
      specialfn::gauss_2f1({g.a0 + taud + 1.0, 1.0, g.half_m + taud + 2.0, g.t})
          .value;
  return cache_.c(tau + 1) * std::exp(g.log_pdf_pref + log_term) * completion;
}

double GeneralizedF::pdf_error_bound(double w, std::size_t tau) const {
  if (!(w > 0.0)) {
    throw DomainError("pdf_error_bound: argument must be positive");
  }
  return pdf_bound_from(geometry(w), tau);
}

std::size_t GeneralizedF::global_tau(double tol) const {
  if (!(tol > 0.0)) {
    throw DomainError("global_tau: tolerance must be positive");
  }
  const double alpha_r = canonical_.alphas.back();
  for (std::size_t tau = 0; tau <= kTermCap; ++tau) {
    const double taud = static_cast<double>(tau);
    const double tail = 1.0 - cache_.partial_sum(tau);
    const double bound =
        m_total_ / (alpha_r * (m_total_ + 2.0 * (taud + 1.0))) * tail;
    if (bound <= tol) return tau;
  }
  throw ConvergenceError("global_tau: bound did not reach tolerance within " +
                         std::to_string(kTermCap) + " terms");
}

double GeneralizedF::pdf_exact_r2(double w) const {
  if (canonical_.alphas.size() != 2) {
    throw DomainError(
        "pdf_exact_r2: requires exactly two distinct weights after "
        "canonicalization (equal weights reduce to the central F path)");
  }
  if (w < 0.0) {
    throw DomainError("pdf_exact_r2: argument must be nonnegative");
  }
  if (w == 0.0) {
    if (m_total_ < 2.0) {
      throw DomainError("pdf_exact_r2: density diverges at 0 when |m| < 2");
    }
    if (m_total_ > 2.0) return 0.0;
    return std::exp(log_b0_ - 0.5 * (nu_ + m_total_) * std::log(a_)) *
           cache_.leading();
  }
  const SeriesGeometry g = geometry(w);
  const double m1 = canonical_.ms.front();
  const double u1 = 1.0 - canonical_.alphas.back() / canonical_.alphas.front();
  const double hyp =
      specialfn::gauss_2f1({g.a0, 0.5 * m1, g.half_m, u1 * g.t}).value;
  return cache_.leading() * std::exp(g.log_pdf_pref) * hyp;
}

SeriesEvaluation GeneralizedF::cdf_series(double y, double tol) const {
  if (y < 0.0) {
    throw DomainError("cdf_series: argument must be nonnegative");
  }
  if (!(tol > 0.0)) {
    throw DomainError("cdf_series: tolerance must be positive");
  }
  if (y == 0.0) return {0.0, 0, 0.0, true};
  if (is_central()) {
    const double alpha = canonical_.alphas.front();
    const double value = specialfn::central_f_cdf(y / alpha, m_total_, nu_);
    return {value, 0, 1e-12, 1e-12 <= tol};
  }

  const SeriesGeometry g = geometry(y);
  const double c0 = g.half_m + 1.0;  // denominator Pochhammer base
  const double pref = std::exp(g.log_cdf_pref);
  KahanSum partial;
  double term = 1.0;  // ((nu+|m|)/2)_j / ((|m|/2+1))_j * t^j at j = 0
  for (std::size_t j = 0; j <= kTermCap; ++j) {
    const double jd = static_cast<double>(j);
    partial.add(cache_.partial_sum(j) * term);
    const double next_term = term * g.t * (g.a0 + jd) / (c0 + jd);
    // Closed-form completion of the tail with all coefficient sums at 1;
    // the residual of the completed estimate carries the missing tail mass.
    const double completion =
        next_term *
        specialfn::gauss_2f1(
            {g.a0 + jd + 1.0, 1.0, g.half_m + jd + 2.0, g.t})
            .value;
    const double bound =
        pref * completion * (1.0 - cache_.partial_sum(j + 1));
    if (bound <= tol || j == kTermCap) {
      const double raw = pref * (partial.value() + completion);
      const double value = std::clamp(raw, 0.0, 1.0);
      return {value, j, bound, bound <= tol};
    }
    term = next_term;
  }
  return {};  // unreachable
}

double GeneralizedF::cdf_error_bound(double y, std::size_t tau) const {
  if (!(y > 0.0)) {
    throw DomainError("cdf_error_bound: argument must be positive");
  }
  if (is_central()) return 0.0;
  const SeriesGeometry g = geometry(y);
  const double c0 = g.half_m + 1.0;
  const double taud = static_cast<double>(tau);
  const double log_term = specialfn::pochhammer_log_ratio(g.a0, c0, tau + 1) +
                          (taud + 1.0) * std::log(g.t);
  const double completion =
      specialfn::gauss_2f1({g.a0 + taud + 1.0, 1.0, g.half_m + taud + 2.0, g.t})
          .value;
  return (1.0 - cache_.partial_sum(tau + 1)) *
         std::exp(g.log_cdf_pref + log_term) * completion;
}

double GeneralizedF::pdf_partial_sum(double w, std::size_t tau) const {
  if (!(w > 0.0)) {
    throw DomainError("pdf_partial_sum: argument must be positive");
  }
  const SeriesGeometry g = geometry(w);
  KahanSum sum;
  double term = 1.0;
  for (std::size_t j = 0; j <= tau; ++j) {
    const double jd = static_cast<double>(j);
    sum.add(cache_.c(j) * term);
    term *= g.t * (g.a0 + jd) / (g.half_m + jd);
  }
  return std::exp(g.log_pdf_pref) * sum.value();
}

double GeneralizedF::cdf_enhanced(double y, std::size_t tau) const {
  if (!(y > 0.0)) {
    throw DomainError("cdf_enhanced: argument must be positive");
  }
  const SeriesGeometry g = geometry(y);
  const double c0 = g.half_m + 1.0;
  KahanSum partial;
  double term = 1.0;
  for (std::size_t j = 0; j <= tau; ++j) {
    const double jd = static_cast<double>(j);
    partial.add(cache_.partial_sum(j) * term);
    term *= g.t * (g.a0 + jd) / (c0 + jd);
  }
  // term is now the first omitted factor; complete its tail in closed form.
  const double taud = static_cast<double>(tau);
  const double completion =
      term *
      specialfn::gauss_2f1({g.a0 + taud + 1.0, 1.0, g.half_m + taud + 2.0, g.t})
          .value;
  return std::exp(g.log_cdf_pref) * (partial.value() + completion);
}

SeriesEvaluation GeneralizedF::survival(double y, double tol) const {
  if (y < 0.0) {
    throw DomainError("survival: argument must be nonnegative");
  }
  if (y == 0.0) return {1.0, 0, 0.0, true};
  if (is_central()) {
    const double alpha = canonical_.alphas.front();
    const double value = specialfn::central_f_sf(y / alpha, m_total_, nu_);
    return {value, 0, 1e-12, true};
  }
  SeriesEvaluation cdf = cdf_series(y, tol);
  cdf.value = std::clamp(1.0 - cdf.value, 0.0, 1.0);
  return cdf;
}

double GeneralizedF::quantile(double prob, double tol) const {
  if (!(prob > 0.0) || !(prob < 1.0)) {
    throw DomainError("quantile: probability must lie in (0, 1)");
  }
  if (!(tol > 0.0)) {
    throw DomainError("quantile: tolerance must be positive");
  }
  if (is_central()) {
    return canonical_.alphas.front() *
           specialfn::central_f_quantile(prob, m_total_, nu_);
  }
  const double inner_tol = 0.25 * tol;
  auto cdf_at = [&](double y) {
    const SeriesEvaluation eval = cdf_series(y, inner_tol);
    if (!eval.converged) {
      throw ConvergenceError("quantile: cdf evaluation did not converge at " +
                             std::to_string(y));
    }
    return eval.value;
  };
  double lo = 0.0;
  double hi = a_;
  while (cdf_at(hi) < prob) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) {
      throw ConvergenceError("quantile: bracketing overflowed");
    }
  }
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double c = cdf_at(mid);
    if (std::fabs(c - prob) <= 0.5 * tol) return mid;
    if (c < prob) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::pair<double, double> GeneralizedF::stochastic_bounds(double y) const {
  if (y < 0.0) {
    throw DomainError("stochastic_bounds: argument must be nonnegative");
  }
  for (double m : original_.ms) {
    if (m != 1.0) {
      throw DomainError(
          "stochastic_bounds: defined only for unit numerator dofs");
    }
  }
  const double r = static_cast<double>(original_.alphas.size());
  const double alpha_star = geometric_mean(original_.alphas);
  const double alpha_max = original_.alphas.front();
  const double lower = specialfn::central_f_sf(y / alpha_star, r, nu_);
  const double upper = specialfn::central_f_sf(y / alpha_max, r, nu_);
  return {lower, upper};
}

}  // namespace genf
