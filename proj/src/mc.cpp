#include "genf/mc.hpp"

#include <algorithm>
#include <cmath>

#include "genf/errors.hpp"

namespace genf::mc {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Per-draw splittable stream: a SplitMix64 walk whose starting state is a
// hash of (seed, draw index), so draws are independent and any draw can be
// generated in isolation.
class Stream {
public:
  Stream(std::uint64_t seed, std::uint64_t index)
      : state_(mix64(seed + kGolden) ^ mix64((index + 1) * kGolden)) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform in the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via the Marsaglia polar method.
  double normal() {
    while (true) {
      const double u = 2.0 * uniform() - 1.0;
      const double v = 2.0 * uniform() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) {
        return u * std::sqrt(-2.0 * std::log(s) / s);
      }
    }
  }

  // Gamma(shape, 1) via the Marsaglia–Tsang squeeze/accept-reject scheme,
  // boosted from shape+1 when shape < 1.
  double gamma(double shape) {
    if (shape < 1.0) {
      return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    while (true) {
      const double x = normal();
      const double t = 1.0 + c * x;
      if (t <= 0.0) continue;
      const double v = t * t * t;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
        return d * v;
      }
    }
  }

  double chi_square(double dof) { return 2.0 * gamma(0.5 * dof); }

private:
  std::uint64_t state_;
};

}  // namespace

std::vector<double> sample(const SamplerConfig& cfg) {
  if (cfg.n < 1) {
    throw DomainError("sample: need at least one draw");
  }
  if (cfg.alphas.empty() || cfg.alphas.size() != cfg.ms.size()) {
    throw DomainError("sample: weights and dofs must be nonempty, same length");
  }
  for (double a : cfg.alphas) {
    if (!(a > 0.0)) throw DomainError("sample: weights must be positive");
  }
  double m_total = 0.0;
  for (double m : cfg.ms) {
    if (!(m > 0.0)) throw DomainError("sample: dofs must be positive");
    m_total += m;
  }
  if (!(cfg.nu > 0.0)) {
    throw DomainError("sample: denominator dof must be positive");
  }

  std::vector<double> draws(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    Stream stream(cfg.seed, static_cast<std::uint64_t>(i));
    double numerator = 0.0;
    for (std::size_t j = 0; j < cfg.alphas.size(); ++j) {
      numerator += cfg.alphas[j] * stream.chi_square(cfg.ms[j]);
    }
    const double denominator = stream.chi_square(cfg.nu) / cfg.nu;
    draws[i] = numerator / m_total / denominator;
  }
  return draws;
}

double empirical_cdf(const std::vector<double>& samples, double y) {
  if (samples.empty()) {
    throw DomainError("empirical_cdf: samples must be nonempty");
  }
  const auto count = std::count_if(samples.begin(), samples.end(),
                                   [y](double s) { return s <= y; });
  return static_cast<double>(count) / static_cast<double>(samples.size());
}

}  // namespace genf::mc
