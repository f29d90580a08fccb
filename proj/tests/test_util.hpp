#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

// Shared helpers for the test suites: oracles deliberately kept
// independent of the library implementation paths they check.

namespace testutil {

/// Kolmogorov-Smirnov statistic of samples against an exact CDF.
inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

/// Critical value of the two-sided KS test at significance alpha
/// (asymptotic form c(alpha)/sqrt(n)).
inline double ks_critical(double alpha, std::size_t n) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

/// Composite Simpson quadrature on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double stdnormal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

} // namespace testutil
