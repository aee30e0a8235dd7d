#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace genf::mc {

// Seeded sampler of W = (sum_i alpha_i chi2(m_i) / |m|) / (chi2(nu) / nu).
// Each draw derives its own generator stream from (seed, draw index), so
// output is reproducible and order-stable regardless of evaluation order.
struct SamplerConfig {
  std::vector<double> alphas;
  std::vector<double> ms;
  double nu = 1.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

std::vector<double> sample(const SamplerConfig& cfg);

// Fraction of samples <= y.
double empirical_cdf(const std::vector<double>& samples, double y);

}  // namespace genf::mc
