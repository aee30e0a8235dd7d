#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include <doctest.h>

#include "genf/coeffs.hpp"
#include "genf/errors.hpp"
#include "genf/genf.hpp"
#include "genf/specialfn.hpp"

using namespace genf;

namespace {

// Independent oracle: the cdf as a nonnegative mixture of scaled central F
// cdfs.  Shares only the coefficient table and incomplete beta with the
// production path; the series/completion machinery is not involved.
double mixture_cdf(const GeneralizedF& gf, double y, std::size_t terms) {
  const coeffs::WeightConfig& cfg = gf.weights();
  const coeffs::CoefficientTable table = coeffs::coeffs_symfun(cfg, terms);
  const double m = gf.m_total();
  const double ar = cfg.alphas.back();
  specialfn::KahanSum acc;
  for (std::size_t j = 0; j < terms; ++j) {
    const double dof = m + 2.0 * static_cast<double>(j);
    acc.add(table.c[j] *
            specialfn::central_f_cdf(m * y / (dof * ar), dof, gf.nu()));
  }
  return acc.value();
}

}  // namespace

TEST_CASE("construction canonicalizes and exposes derived constants") {
  const GeneralizedF gf({1.0, 2.0}, {1.0, 1.0}, 6.0);
  CHECK(gf.weights().alphas == std::vector<double>{2.0, 1.0});
  CHECK(gf.m_total() == 2.0);
  CHECK(gf.scale_a() == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(gf.t_of(3.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_FALSE(gf.is_central());

  const GeneralizedF central({2.0, 2.0}, {1.0, 3.0}, 5.0);
  CHECK(central.is_central());
  CHECK(central.m_total() == 4.0);

  CHECK_THROWS_AS(GeneralizedF({1.0}, {1.0}, 0.0), DomainError);
  CHECK_THROWS_AS(GeneralizedF({}, {}, 5.0), DomainError);
}

TEST_CASE("survival matches reference tail probabilities") {
  // Two-outlier leverage configurations with known tails.
  const GeneralizedF hald({0.408676, 0.124019}, {1.0, 1.0}, 6.0);
  CHECK(std::fabs(hald.survival(2.19331, 1e-8).value - 0.0218128) <= 1e-6);

  const GeneralizedF longley({0.690029, 0.614130}, {1.0, 1.0}, 7.0);
  CHECK(std::fabs(longley.survival(1.812433, 1e-8).value - 0.129271964) <=
        2e-8);
}

TEST_CASE("equal weights reduce to the scaled central F") {
  const double alpha = 1.7;
  const GeneralizedF gf({alpha, alpha}, {2.0, 3.0}, 9.0);
  REQUIRE(gf.is_central());
  for (double y : {0.2, 0.9, 2.4, 7.0}) {
    CHECK(gf.cdf_series(y, 1e-10).value ==
          doctest::Approx(specialfn::central_f_cdf(y / alpha, 5.0, 9.0))
              .epsilon(1e-12));
    CHECK(gf.pdf_series(y).value ==
          doctest::Approx(specialfn::central_f_pdf(y / alpha, 5.0, 9.0) / alpha)
              .epsilon(1e-12));
  }
}

TEST_CASE("cdf agrees with the central-F mixture representation") {
  const GeneralizedF gf({2.0, 1.0}, {1.0, 3.0}, 7.0);
  for (double y : {0.5, 1.5, 4.0}) {
    const double series = gf.cdf_series(y, 1e-13).value;
    const double mixture = mixture_cdf(gf, y, 400);
    CHECK(series == doctest::Approx(mixture).epsilon(1e-12));
  }
}

TEST_CASE("cdf and survival are complementary and bounded") {
  const GeneralizedF gf({3.0, 1.5, 0.5}, {2.0, 1.0, 1.0}, 8.0);
  for (double y : {0.1, 1.0, 3.3, 12.0}) {
    const SeriesEvaluation cdf = gf.cdf_series(y, 1e-9);
    const SeriesEvaluation sf = gf.survival(y, 1e-9);
    CHECK(cdf.converged);
    CHECK(cdf.value + sf.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cdf.value >= 0.0);
    CHECK(cdf.value <= 1.0);
  }
  CHECK(gf.cdf_series(0.0).value == 0.0);
  CHECK(gf.survival(0.0).value == 1.0);
  CHECK_THROWS_AS(gf.cdf_series(-1.0), DomainError);
  CHECK_THROWS_AS(gf.survival(-1.0), DomainError);
}

TEST_CASE("default cdf tolerance is met and reported") {
  const GeneralizedF gf({2.0, 1.0}, {1.0, 1.0}, 6.0);
  const SeriesEvaluation eval = gf.cdf_series(2.0);
  CHECK(eval.converged);
  CHECK(eval.error_bound <= GeneralizedF::kDefaultTol);
}

TEST_CASE("density at the origin follows the total-dof trichotomy") {
  // |m| = 2: the w^{(|m|-2)/2} prefactor is flat and only term 0 survives;
  // for weights (2,1), dofs (1,1), nu = 4 the value collapses to c_0.
  const GeneralizedF flat({2.0, 1.0}, {1.0, 1.0}, 4.0);
  const SeriesEvaluation at_zero = flat.pdf_series(0.0);
  CHECK(at_zero.value ==
        doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-13));
  CHECK(at_zero.converged);
  CHECK(flat.pdf_exact_r2(0.0) ==
        doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-13));

  const GeneralizedF rising({2.0, 1.0}, {2.0, 3.0}, 4.0);
  CHECK(rising.pdf_series(0.0).value == 0.0);

  const GeneralizedF diverging({2.0, 1.0}, {0.5, 1.0}, 4.0);
  CHECK_THROWS_AS(diverging.pdf_series(0.0), DomainError);
  CHECK_THROWS_AS(diverging.pdf_series(-0.5), DomainError);
}

TEST_CASE("closed-form two-component density matches the series") {
  const GeneralizedF gf({2.0, 1.0}, {1.0, 3.0}, 7.0);
  for (double w : {0.1, 0.7, 2.0, 6.5}) {
    CHECK(gf.pdf_exact_r2(w) ==
          doctest::Approx(gf.pdf_series(w, 1e-12).value).epsilon(1e-10));
  }
  const GeneralizedF three({3.0, 2.0, 1.0}, {1.0, 1.0, 1.0}, 5.0);
  CHECK_THROWS_AS(three.pdf_exact_r2(1.0), DomainError);
}

TEST_CASE("pdf partial sums stay within the truncation bound") {
  const GeneralizedF gf({2.0, 1.0}, {1.0, 3.0}, 7.0);
  for (double w : {0.4, 1.3, 5.0}) {
    const double reference = gf.pdf_partial_sum(w, 400);
    // The bound constrains the exact-arithmetic truncation error; the
    // measured difference additionally carries ~1 ulp of evaluation noise.
    const double noise = 1e-15 * (1.0 + std::fabs(reference));
    for (std::size_t tau = 0; tau <= 30; ++tau) {
      const double actual = std::fabs(gf.pdf_partial_sum(w, tau) - reference);
      CHECK(actual <= gf.pdf_error_bound(w, tau) * (1.0 + 1e-12) + noise);
    }
  }
}

TEST_CASE("adaptive pdf equals its partial sum at the reported truncation") {
  const GeneralizedF gf({4.0, 1.5}, {2.0, 1.0}, 9.0);
  const double w = 1.8;
  const SeriesEvaluation eval = gf.pdf_series(w, 1e-9);
  CHECK(eval.converged);
  CHECK(eval.value ==
        doctest::Approx(gf.pdf_partial_sum(w, eval.tau_used)).epsilon(1e-14));
}

TEST_CASE("enhanced cdf estimate overshoots by at most its bound") {
  const GeneralizedF gf({2.0, 1.0}, {1.0, 3.0}, 7.0);
  for (double y : {0.6, 2.2}) {
    const double reference = gf.cdf_enhanced(y, 400);
    // Allowance for evaluation rounding on top of the exact-arithmetic
    // overshoot guarantee.
    const double noise = 1e-15 * (1.0 + std::fabs(reference));
    for (std::size_t tau : {0, 1, 3, 8, 20}) {
      const double estimate = gf.cdf_enhanced(y, tau);
      const double bound = gf.cdf_error_bound(y, tau);
      CHECK(estimate >= reference - 1e-14);
      CHECK(estimate - reference <= bound * (1.0 + 1e-12) + noise);
    }
  }
}

TEST_CASE("adaptive cdf equals the enhanced estimate at its truncation") {
  const GeneralizedF gf({4.0, 1.5}, {2.0, 1.0}, 9.0);
  const double y = 2.5;
  const SeriesEvaluation eval = gf.cdf_series(y, 1e-10);
  CHECK(eval.converged);
  CHECK(eval.value ==
        doctest::Approx(gf.cdf_enhanced(y, eval.tau_used)).epsilon(1e-14));
}

TEST_CASE("global truncation bound selects the smallest index") {
  const GeneralizedF gf({2.0, 1.0}, {1.0, 1.0}, 6.0);
  const coeffs::CoefficientCache cache(gf.weights());
  const double m = gf.m_total();
  const double ar = gf.weights().alphas.back();
  auto bound_at = [&](std::size_t tau) {
    return m / (ar * (m + 2.0 * (static_cast<double>(tau) + 1.0))) *
           (1.0 - cache.partial_sum(tau));
  };
  for (double tol : {1e-3, 1e-5, 1e-7}) {
    const std::size_t tau = gf.global_tau(tol);
    CHECK(bound_at(tau) <= tol);
    if (tau > 0) CHECK(bound_at(tau - 1) > tol);
  }
}

TEST_CASE("global bound reports failure past the term cap") {
  // A weight ratio of 1e9 leaves the coefficient mass essentially unspent
  // after 10000 terms, so the requested tolerance is unreachable.
  const GeneralizedF gf({1e9, 1.0}, {1.0, 1.0}, 2.0);
  CHECK_THROWS_AS(gf.global_tau(1e-5), ConvergenceError);
}

TEST_CASE("series evaluations report non-convergence at the term cap") {
  const GeneralizedF gf({1e9, 1.0}, {1.0, 1.0}, 2.0);
  const SeriesEvaluation cdf = gf.cdf_series(256.0, 1e-18);
  CHECK_FALSE(cdf.converged);
  CHECK(cdf.tau_used == GeneralizedF::kTermCap);
  CHECK(cdf.error_bound > 1e-18);
  CHECK(cdf.value >= 0.0);
  CHECK(cdf.value <= 1.0);
}

TEST_CASE("quantile inverts the cdf to the requested tolerance") {
  const GeneralizedF gf({2.0, 1.0}, {1.0, 3.0}, 7.0);
  double prev = 0.0;
  for (double p : {0.1, 0.5, 0.95, 0.99}) {
    const double q = gf.quantile(p);
    CHECK(std::fabs(gf.cdf_series(q, 1e-10).value - p) <= 1e-8);
    CHECK(q > prev);
    prev = q;
  }
  CHECK_THROWS_AS(gf.quantile(0.0), DomainError);
  CHECK_THROWS_AS(gf.quantile(1.0), DomainError);

  const GeneralizedF central({2.0, 2.0}, {1.0, 3.0}, 5.0);
  CHECK(central.quantile(0.9) ==
        doctest::Approx(2.0 * specialfn::central_f_quantile(0.9, 4.0, 5.0))
            .epsilon(1e-12));
}

TEST_CASE("quantile surfaces cdf non-convergence as an error") {
  // Bracketing walks into arguments where the series cannot meet the inner
  // tolerance within the term cap.
  const GeneralizedF gf({1e9, 1.0}, {1.0, 1.0}, 2.0);
  CHECK_THROWS_AS(gf.quantile(0.5), ConvergenceError);
}

TEST_CASE("stochastic bounds bracket the exact tail for unit dofs") {
  const GeneralizedF hald({0.408676, 0.124019}, {1.0, 1.0}, 6.0);
  const auto [lo, hi] = hald.stochastic_bounds(2.19331);
  CHECK(std::fabs(lo - 0.0130499601) <= 1e-8);
  CHECK(std::fabs(hi - 0.0460972553) <= 1e-8);
  const double exact = hald.survival(2.19331, 1e-9).value;
  CHECK(lo <= exact);
  CHECK(exact <= hi);

  const GeneralizedF longley({0.690023929, 0.6141017668}, {1.0, 1.0}, 7.0);
  const auto [lo2, hi2] = longley.stochastic_bounds(1.805659122);
  CHECK(std::fabs(lo2 - 0.1296784628) <= 1e-8);
  CHECK(std::fabs(hi2 - 0.1417103435) <= 1e-8);
}

TEST_CASE("stochastic bounds require unit dofs and keep original weights") {
  const GeneralizedF mixed({2.0, 1.0}, {2.0, 1.0}, 6.0);
  CHECK_THROWS_AS(mixed.stochastic_bounds(1.0), DomainError);

  // Equal weights merge in the canonical form, but the screening bounds
  // are built from the supplied (unmerged) unit-dof weights.
  const GeneralizedF equal({0.3, 0.3}, {1.0, 1.0}, 6.0);
  REQUIRE(equal.is_central());
  const auto [lo, hi] = equal.stochastic_bounds(0.9);
  const double expected = specialfn::central_f_sf(0.9 / 0.3, 2.0, 6.0);
  CHECK(lo == doctest::Approx(expected).epsilon(1e-13));
  CHECK(hi == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("merge policy changes the parameterization, not the law") {
  const std::vector<double> alphas = {2.0, 2.0, 1.0};
  const std::vector<double> ms = {1.0, 1.0, 1.0};
  const GeneralizedF merged(alphas, ms, 5.0, MergePolicy::kMergeEqual);
  const GeneralizedF distinct(alphas, ms, 5.0, MergePolicy::kKeepDistinct);
  CHECK(merged.weights().alphas.size() == 2);
  CHECK(distinct.weights().alphas.size() == 3);
  for (double y : {0.3, 1.1, 4.4}) {
    CHECK(merged.cdf_series(y, 1e-11).value ==
          doctest::Approx(distinct.cdf_series(y, 1e-11).value).epsilon(1e-10));
  }
}
