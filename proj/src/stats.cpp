#include "lcf/stats.hpp"

#include <algorithm>
#include <cmath>

#include "lcf/common.hpp"

namespace lcf::stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw NumericError("mean of empty sample");
  KahanSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

double sample_stddev(std::span<const double> xs) {
  if (xs.size() < 2) throw NumericError("stddev needs at least two values");
  const double m = mean(xs);
  KahanSum s;
  for (double x : xs) s.add((x - m) * (x - m));
  return std::sqrt(s.value() / static_cast<double>(xs.size() - 1));
}

double quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw NumericError("quantile of empty sample");
  if (q <= 0.0) return sorted.front();
  if (q >= 1.0) return sorted.back();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

namespace {

// Asymptotic survival function of the Kolmogorov distribution.
double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::fabs(term) < 1e-16 * std::fabs(sum) + 1e-300) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty())
    throw NumericError("ks_two_sample: empty sample");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t ia = 0, ib = 0;
  double d = 0.0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] <= b[ib])
      ++ia;
    else
      ++ib;
    d = std::fmax(d, std::fabs(static_cast<double>(ia) / na -
                               static_cast<double>(ib) / nb));
  }
  const double ne = na * nb / (na + nb);
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  return {d, kolmogorov_q(lambda)};
}

Histogram histogram(std::span<const double> xs, int bins) {
  if (xs.empty() || bins < 1) throw NumericError("histogram: bad input");
  Histogram h;
  h.lo = *std::min_element(xs.begin(), xs.end());
  h.hi = *std::max_element(xs.begin(), xs.end());
  h.counts.assign(bins, 0);
  const double width = h.hi > h.lo ? (h.hi - h.lo) / bins : 1.0;
  for (double x : xs) {
    int i = static_cast<int>((x - h.lo) / width);
    i = std::clamp(i, 0, bins - 1);
    h.counts[i]++;
  }
  return h;
}

}  // namespace lcf::stats
