#pragma once

#include <span>
#include <vector>

namespace lcf::stats {

double mean(std::span<const double> xs);
double sample_stddev(std::span<const double> xs);

// Quantile with linear interpolation; input must be sorted ascending.
double quantile(std::span<const double> sorted, double q);

// Two-sample Kolmogorov-Smirnov test. Inputs must be sorted ascending.
// The p-value uses the asymptotic Kolmogorov distribution with the usual
// finite-sample correction of the effective sample size.
struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<int> counts;
};
Histogram histogram(std::span<const double> xs, int bins);

}  // namespace lcf::stats
