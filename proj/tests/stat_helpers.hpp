#pragma once

// Test-only statistics: interval overlap and a Kolmogorov-Smirnov test.

#include <algorithm>
#include <cmath>
#include <vector>

#include "wigneg/mc.hpp"

namespace wigneg::testing {

inline WilsonInterval interval(const NegativityEstimate& e, double z = 3.0) {
  return wilson_interval(e.negatives, e.trials, z);
}

inline bool overlap(const WilsonInterval& a, const WilsonInterval& b) {
  return a.low <= b.high && b.low <= a.high;
}

inline bool contains(const WilsonInterval& a, double x) { return a.low <= x && x <= a.high; }

/// Asymptotic Kolmogorov survival function Q(lambda).
inline double kolmogorov_survival(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// p-value of the one-sample KS test of `sample` against U(0, 1).
inline double ks_uniform_pvalue(std::vector<double> sample) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double x = sample[i];
    d = std::max({d, (i + 1) / n - x, x - i / n});
  }
  const double sn = std::sqrt(n);
  return kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d);
}

}  // namespace wigneg::testing
