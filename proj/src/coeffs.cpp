#include "genf/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "genf/specialfn.hpp"

namespace genf::coeffs {

namespace {

constexpr double kMergeRelTol = 1e-12;
constexpr double kRoundingSlack = 1e-14;

// Clamp a quantity that is nonnegative in exact arithmetic: tiny negative
// values are rounding noise and snap to zero; anything worse is a genuine
// numerical failure.
double clamp_nonnegative(double x, const char* what) {
  if (x >= 0.0) return x;
  if (x > -kRoundingSlack) return 0.0;
  throw ConvergenceError(std::string(what) +
                         " went negative beyond rounding slack: " +
                         std::to_string(x));
}

double leading_coefficient(const WeightConfig& cfg) {
  const double alpha_r = cfg.alphas.back();
  specialfn::KahanSum log_a;
  for (std::size_t i = 0; i < cfg.alphas.size(); ++i) {
    log_a.add(-0.5 * cfg.ms[i] * std::log(cfg.alphas[i] / alpha_r));
  }
  return std::exp(log_a.value());
}

std::vector<double> u_values(const WeightConfig& cfg) {
  const double alpha_r = cfg.alphas.back();
  std::vector<double> u(cfg.alphas.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = 1.0 - alpha_r / cfg.alphas[i];
  }
  return u;
}

void validate(const std::vector<double>& alphas, const std::vector<double>& ms) {
  if (alphas.empty()) {
    throw DomainError("weight config: at least one component required");
  }
  if (alphas.size() != ms.size()) {
    throw DomainError("weight config: weights and dofs must have equal length");
  }
  for (double a : alphas) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw DomainError("weight config: weights must be finite and positive");
    }
  }
  for (double m : ms) {
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw DomainError("weight config: dofs must be finite and positive");
    }
  }
}

}  // namespace

WeightConfig canonical(std::vector<double> alphas, std::vector<double> ms,
                       bool merge_equal_weights) {
  validate(alphas, ms);
  std::vector<std::size_t> order(alphas.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return alphas[a] > alphas[b];
  });
  WeightConfig cfg;
  cfg.alphas.reserve(alphas.size());
  cfg.ms.reserve(ms.size());
  for (std::size_t idx : order) {
    const double a = alphas[idx];
    const double m = ms[idx];
    if (merge_equal_weights && !cfg.alphas.empty() &&
        cfg.alphas.back() - a <= kMergeRelTol * cfg.alphas.back()) {
      cfg.ms.back() += m;
    } else {
      cfg.alphas.push_back(a);
      cfg.ms.push_back(m);
    }
  }
  return cfg;
}

CoefficientTable coeffs_kjb(const WeightConfig& cfg, std::size_t count) {
  if (count == 0) {
    throw DomainError("coeffs_kjb: count must be positive");
  }
  const std::size_t r = cfg.alphas.size();
  const std::vector<double> u = u_values(cfg);

  // The convolution compounds rounding over O(count^2) products, so the
  // working sequence stays in extended precision; emitted values narrow to
  // double.  d_k = sum_i (m_i/2) u_i^k for k = 1..count-1.
  std::vector<long double> d(count, 0.0L);
  std::vector<long double> upow(r, 1.0L);
  for (std::size_t k = 1; k < count; ++k) {
    long double dk = 0.0L;
    for (std::size_t i = 0; i < r; ++i) {
      upow[i] *= u[i];
      dk += 0.5L * static_cast<long double>(cfg.ms[i]) * upow[i];
    }
    d[k] = dk;
  }

  CoefficientTable table;
  table.c.resize(count);
  table.partial_sums.resize(count);
  std::vector<long double> work(count, 0.0L);
  work[0] = leading_coefficient(cfg);
  table.c[0] = static_cast<double>(work[0]);
  long double running = work[0];
  table.partial_sums[0] = static_cast<double>(running);
  for (std::size_t j = 1; j < count; ++j) {
    long double acc = 0.0L;
    for (std::size_t l = 0; l < j; ++l) {
      acc += d[j - l] * work[l];
    }
    work[j] = acc / static_cast<long double>(j);
    table.c[j] =
        clamp_nonnegative(static_cast<double>(work[j]), "mixture coefficient");
    running += work[j];
    table.partial_sums[j] = std::min(static_cast<double>(running), 1.0);
  }
  table.tail =
      clamp_nonnegative(1.0 - table.partial_sums.back(), "coefficient tail");
  return table;
}

namespace {

std::vector<long double> sym_poly_ext(const std::vector<double>& values) {
  std::vector<long double> e(values.size() + 1, 0.0L);
  e[0] = 1.0L;
  std::size_t used = 0;
  for (double v : values) {
    ++used;
    for (std::size_t i = used; i >= 1; --i) {
      e[i] += static_cast<long double>(v) * e[i - 1];
    }
  }
  return {e.begin() + 1, e.end()};
}

// f_i = sum_j mu_j u_j e_{i-1}(u with u_j removed), where the reduced
// elementary symmetric polynomials follow from peeling one root off:
// etil_0 = 1, etil_i = e_i - u_j etil_{i-1}.
std::vector<long double> dof_weighted_sym(const std::vector<double>& u,
                                          const std::vector<double>& ms,
                                          const std::vector<long double>& e) {
  const std::size_t n = u.size();
  std::vector<long double> f(n, 0.0L);
  std::vector<long double> reduced(n, 0.0L);
  for (std::size_t j = 0; j < n; ++j) {
    const long double uj = u[j];
    long double prev = 1.0L;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      reduced[i] = e[i] - uj * prev;
      prev = reduced[i];
    }
    const long double mu = 0.5L * static_cast<long double>(ms[j]);
    f[0] += mu * uj;
    for (std::size_t i = 1; i < n; ++i) {
      f[i] += mu * uj * reduced[i - 1];
    }
  }
  return f;
}

long double next_p(const std::vector<long double>& p,
                   const std::vector<long double>& e,
                   const std::vector<long double>& f) {
  const std::size_t k = p.size();
  const std::size_t n = e.size();
  long double acc = 0.0L;
  for (std::size_t i = 1; i <= std::min(k, n); ++i) {
    const long double sign = (i % 2 == 1) ? 1.0L : -1.0L;
    const long double weight =
        static_cast<long double>(k - i) * e[i - 1] + f[i - 1];
    acc += sign * weight * p[k - i];
  }
  return acc / static_cast<long double>(k);
}

}  // namespace

std::vector<double> sym_poly(const std::vector<double>& values) {
  const std::vector<long double> e = sym_poly_ext(values);
  return {e.begin(), e.end()};
}

CoefficientTable coeffs_symfun(const WeightConfig& cfg, std::size_t count) {
  if (count == 0) {
    throw DomainError("coeffs_symfun: count must be positive");
  }
  const std::vector<double> u = u_values(cfg);
  const std::vector<long double> e = sym_poly_ext(u);
  const std::vector<long double> f = dof_weighted_sym(u, cfg.ms, e);
  const long double lead = leading_coefficient(cfg);

  CoefficientTable table;
  table.c.resize(count);
  table.partial_sums.resize(count);
  std::vector<long double> p;
  p.reserve(count);
  p.push_back(1.0L);
  table.c[0] = static_cast<double>(lead);
  long double running = lead;
  table.partial_sums[0] = static_cast<double>(running);
  for (std::size_t k = 1; k < count; ++k) {
    p.push_back(next_p(p, e, f));
    const long double ck = lead * p.back();
    table.c[k] =
        clamp_nonnegative(static_cast<double>(ck), "mixture coefficient");
    running += ck;
    table.partial_sums[k] = std::min(static_cast<double>(running), 1.0);
  }
  table.tail =
      clamp_nonnegative(1.0 - table.partial_sums.back(), "coefficient tail");
  return table;
}

CoefficientCache::CoefficientCache(WeightConfig cfg) : cfg_(std::move(cfg)) {
  validate(cfg_.alphas, cfg_.ms);
  for (std::size_t i = 1; i < cfg_.alphas.size(); ++i) {
    if (cfg_.alphas[i] > cfg_.alphas[i - 1]) {
      throw DomainError("CoefficientCache: weights must be nonincreasing");
    }
  }
  u_ = u_values(cfg_);
  e_ = sym_poly_ext(u_);
  f_ = dof_weighted_sym(u_, cfg_.ms, e_);
  leading_ = leading_coefficient(cfg_);
  p_.push_back(1.0L);
  s_run_ = leading_;
  s_.push_back(leading_);
}

void CoefficientCache::ensure(std::size_t upto) const {
  while (p_.size() <= upto) {
    p_.push_back(next_p(p_, e_, f_));
    const long double ck = static_cast<long double>(leading_) * p_.back();
    clamp_nonnegative(static_cast<double>(ck), "mixture coefficient");
    s_run_ += ck;
    s_.push_back(std::min(static_cast<double>(s_run_), 1.0));
  }
}

double CoefficientCache::c(std::size_t j) const {
  std::lock_guard<std::mutex> lock(mu_);
  ensure(j);
  return clamp_nonnegative(
      static_cast<double>(static_cast<long double>(leading_) * p_[j]),
      "mixture coefficient");
}

double CoefficientCache::partial_sum(std::size_t j) const {
  std::lock_guard<std::mutex> lock(mu_);
  ensure(j);
  return s_[j];
}

double CoefficientCache::leading() const { return leading_; }

}  // namespace genf::coeffs
