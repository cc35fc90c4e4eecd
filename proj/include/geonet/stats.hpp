#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace geonet::stats {

struct Moments {
  double mean = 0.0;
  // Unbiased (n-1) sample variance; 0 for a single sample.
  double variance = 0.0;
  std::size_t n = 0;
};

Moments moments(std::span<const double> xs);
Moments moments(std::span<const std::uint64_t> xs);

// log P(X = k) for X ~ Poisson(mean).
double poisson_log_pmf(std::uint64_t k, double mean);

// Upper tail P(X >= x) of a chi-square variable with `dof` degrees of freedom.
double chi_square_sf(double x, unsigned dof);

// Pearson statistic for observed counts against expected probabilities.
double chi_square_statistic(std::span<const std::uint64_t> observed,
                            std::span<const double> probabilities);

// Kolmogorov distribution survival function Q(lambda) = P(K > lambda).
double kolmogorov_sf(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// One-sample KS test against the Exponential(rate) law. Sorts a copy.
KsResult ks_exponential(std::vector<double> samples, double rate);

// Standard error of a binomial proportion estimate.
double binomial_se(double p, std::size_t n);

}  // namespace geonet::stats
