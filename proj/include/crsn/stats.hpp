#pragma once

#include <span>

namespace crsn::stats {

double mean(std::span<const double> values);

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_std(std::span<const double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of y on x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct KendallTrend {
  /// Concordant minus discordant pairs against the index order.
  long long s = 0;
  double tau = 0.0;
  /// One-sided P(S' >= s) under the null of exchangeable values, from the
  /// exact permutation distribution of inversion counts.
  double p_increasing = 1.0;
};

/// Mann-Kendall trend test of `values` against their order.
KendallTrend kendall_trend(std::span<const double> values);

}  // namespace crsn::stats
