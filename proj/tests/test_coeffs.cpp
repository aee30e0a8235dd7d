#include <cmath>
#include <cstddef>
#include <vector>

#include <doctest.h>

#include "genf/coeffs.hpp"
#include "genf/errors.hpp"

using namespace genf;
using namespace genf::coeffs;

TEST_CASE("canonical sorts weights descending and carries dofs along") {
  const WeightConfig cfg = canonical({1.0, 5.0, 2.0}, {1.0, 2.0, 3.0});
  CHECK(cfg.alphas == std::vector<double>{5.0, 2.0, 1.0});
  CHECK(cfg.ms == std::vector<double>{2.0, 3.0, 1.0});
}

TEST_CASE("canonical merges weights equal to relative 1e-12 by summing dofs") {
  const double bumped = 3.0 * (1.0 + 1e-13);
  const WeightConfig merged = canonical({3.0, bumped, 1.0}, {2.0, 4.0, 1.0});
  REQUIRE(merged.alphas.size() == 2);
  CHECK(merged.alphas[0] == bumped);
  CHECK(merged.ms == std::vector<double>{6.0, 1.0});

  const WeightConfig kept =
      canonical({3.0, bumped, 1.0}, {2.0, 4.0, 1.0}, false);
  CHECK(kept.alphas.size() == 3);
}

TEST_CASE("canonical rejects invalid configurations") {
  CHECK_THROWS_AS(canonical({}, {}), DomainError);
  CHECK_THROWS_AS(canonical({1.0, 2.0}, {1.0}), DomainError);
  CHECK_THROWS_AS(canonical({1.0, -2.0}, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(canonical({1.0, 2.0}, {1.0, 0.0}), DomainError);
}

TEST_CASE("two-component coefficients match the closed form") {
  // With two weights the generating function is a single binomial power:
  // c_j = A (m_1/2)_j u_1^j / j! exactly.
  const WeightConfig cfg = canonical({5.0, 2.0}, {3.0, 7.0});
  const CoefficientTable table = coeffs_symfun(cfg, 25);
  const double lead = std::pow(2.0 / 5.0, 1.5);
  const double u1 = 1.0 - 2.0 / 5.0;
  double closed = lead;
  for (std::size_t j = 0; j < 25; ++j) {
    CHECK(table.c[j] == doctest::Approx(closed).epsilon(1e-13));
    const double jd = static_cast<double>(j);
    closed *= (1.5 + jd) * u1 / (jd + 1.0);
  }
}

TEST_CASE("leading coefficients for weights (2,1), dofs (1,1) are exact") {
  const WeightConfig cfg = canonical({2.0, 1.0}, {1.0, 1.0});
  const CoefficientTable table = coeffs_kjb(cfg, 3);
  const double root2 = std::sqrt(2.0);
  CHECK(table.c[0] == doctest::Approx(root2 / 2.0).epsilon(1e-14));
  CHECK(table.c[1] == doctest::Approx(root2 / 8.0).epsilon(1e-14));
  CHECK(table.c[2] == doctest::Approx(3.0 * root2 / 64.0).epsilon(1e-14));
}

TEST_CASE("power-sum and symmetric-function recursions agree termwise") {
  const std::vector<WeightConfig> configs = {
      canonical({4.0, 2.5, 1.0}, {1.5, 2.0, 3.0}),
      canonical({10.0, 7.0, 3.0, 1.0}, {2.0, 1.0, 4.0, 0.5}),
      canonical({1.8, 1.2}, {0.7, 5.0}),
  };
  for (const WeightConfig& cfg : configs) {
    const CoefficientTable a = coeffs_kjb(cfg, 60);
    const CoefficientTable b = coeffs_symfun(cfg, 60);
    for (std::size_t j = 0; j < 60; ++j) {
      // Coefficients lie in [0, 1], so 1e-13 absolute is the meaningful
      // agreement scale; deep-tail terms carry relative rounding growth.
      CHECK(std::fabs(a.c[j] - b.c[j]) <= 1e-13);
    }
  }
}

TEST_CASE("coefficients are nonnegative with monotone partial sums") {
  const WeightConfig cfg = canonical({6.0, 2.0, 0.5}, {3.0, 1.0, 2.0});
  const CoefficientTable table = coeffs_symfun(cfg, 120);
  double prev = 0.0;
  for (std::size_t j = 0; j < table.c.size(); ++j) {
    CHECK(table.c[j] >= 0.0);
    CHECK(table.partial_sums[j] >= prev);
    CHECK(table.partial_sums[j] <= 1.0);
    prev = table.partial_sums[j];
  }
  CHECK(table.tail >= 0.0);
}

TEST_CASE("partial sums approach one") {
  const WeightConfig cfg = canonical({2.0, 1.0}, {1.0, 1.0});
  const CoefficientTable table = coeffs_symfun(cfg, 61);
  CHECK(table.partial_sums.back() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a single distinct weight gives the degenerate table") {
  // Equal weights merge into one component: c_0 = 1 and nothing follows.
  const WeightConfig cfg = canonical({3.0, 3.0}, {2.0, 5.0});
  REQUIRE(cfg.alphas.size() == 1);
  CHECK(cfg.ms[0] == 7.0);
  const CoefficientTable table = coeffs_symfun(cfg, 10);
  CHECK(table.c[0] == doctest::Approx(1.0).epsilon(1e-15));
  for (std::size_t j = 1; j < 10; ++j) {
    CHECK(table.c[j] == 0.0);
  }
  CHECK(table.tail == 0.0);
}

TEST_CASE("sym_poly expands elementary symmetric polynomials") {
  const std::vector<double> e = sym_poly({1.0, 2.0, 3.0});
  REQUIRE(e.size() == 3);
  CHECK(e[0] == doctest::Approx(6.0));   // 1 + 2 + 3
  CHECK(e[1] == doctest::Approx(11.0));  // 1*2 + 1*3 + 2*3
  CHECK(e[2] == doctest::Approx(6.0));   // 1*2*3
}

TEST_CASE("CoefficientCache matches the batch table and grows on demand") {
  const WeightConfig cfg = canonical({4.0, 2.5, 1.0}, {1.5, 2.0, 3.0});
  const CoefficientTable table = coeffs_symfun(cfg, 41);
  const CoefficientCache cache(cfg);
  CHECK(cache.leading() == doctest::Approx(table.c[0]).epsilon(1e-15));
  // Out-of-order access exercises the incremental extension path.
  for (std::size_t j : {10, 3, 25, 0, 40}) {
    CHECK(cache.c(j) == doctest::Approx(table.c[j]).epsilon(1e-13));
    CHECK(cache.partial_sum(j) ==
          doctest::Approx(table.partial_sums[j]).epsilon(1e-13));
  }
}

TEST_CASE("CoefficientCache rejects weights out of order") {
  WeightConfig cfg;
  cfg.alphas = {1.0, 2.0};
  cfg.ms = {1.0, 1.0};
  CHECK_THROWS_AS(CoefficientCache{cfg}, DomainError);
}
