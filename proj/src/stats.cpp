#include "geonet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace geonet::stats {

namespace {

template <typename T>
Moments moments_impl(std::span<const T> xs) {
  Moments m;
  m.n = xs.size();
  if (xs.empty()) return m;
  // Welford.
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (const T& raw : xs) {
    const double x = static_cast<double>(raw);
    ++k;
    const double delta = x - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (x - mean);
  }
  m.mean = mean;
  m.variance = xs.size() > 1 ? m2 / static_cast<double>(xs.size() - 1) : 0.0;
  return m;
}

}  // namespace

Moments moments(std::span<const double> xs) { return moments_impl(xs); }
Moments moments(std::span<const std::uint64_t> xs) { return moments_impl(xs); }

double poisson_log_pmf(std::uint64_t k, double mean) {
  const double kd = static_cast<double>(k);
  if (mean == 0.0) return k == 0 ? 0.0 : -INFINITY;
  return -mean + kd * std::log(mean) - std::lgamma(kd + 1.0);
}

double chi_square_sf(double x, unsigned dof) {
  if (dof == 0) throw std::invalid_argument("chi_square_sf: dof must be positive");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

double chi_square_statistic(std::span<const std::uint64_t> observed,
                            std::span<const double> probabilities) {
  if (observed.size() != probabilities.size()) {
    throw std::invalid_argument("chi_square_statistic: size mismatch");
  }
  double total = 0.0;
  for (auto o : observed) total += static_cast<double>(o);
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = total * probabilities[i];
    if (expected <= 0.0) continue;
    const double d = static_cast<double>(observed[i]) - expected;
    stat += d * d / expected;
  }
  return stat;
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::fabs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_exponential(std::vector<double> samples, double rate) {
  if (samples.empty()) throw std::invalid_argument("ks_exponential: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = -std::expm1(-rate * samples[i]);
    d = std::max(d, static_cast<double>(i + 1) / n - cdf);
    d = std::max(d, cdf - static_cast<double>(i) / n);
  }
  const double sqrt_n = std::sqrt(n);
  // Stephens' finite-sample correction.
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
  return {d, kolmogorov_sf(lambda)};
}

double binomial_se(double p, std::size_t n) {
  if (n == 0) return INFINITY;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace geonet::stats
