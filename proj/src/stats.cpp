#include "crsn/stats.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace crsn::stats {

double mean(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("mean of no values");
  }
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  return sum / static_cast<double>(values.size());
}

double sample_std(std::span<const double> values) {
  if (values.size() < 2) {
    return 0.0;
  }
  const double m = mean(values);
  double sum = 0.0;
  for (double v : values) {
    sum += (v - m) * (v - m);
  }
  return std::sqrt(sum / static_cast<double>(values.size() - 1));
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("linear_fit needs two equal-length series of length >= 2");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) {
    throw std::invalid_argument("linear_fit: x has zero variance");
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

KendallTrend kendall_trend(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) {
    throw std::invalid_argument("kendall_trend needs at least two values");
  }
  KendallTrend out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (values[j] > values[i]) {
        ++out.s;
      } else if (values[j] < values[i]) {
        --out.s;
      }
    }
  }
  const long long pairs = static_cast<long long>(n * (n - 1) / 2);
  out.tau = static_cast<double>(out.s) / static_cast<double>(pairs);

  // counts[i] = number of permutations of n items with i inversions.
  std::vector<double> counts(1, 1.0);
  for (std::size_t m = 2; m <= n; ++m) {
    std::vector<double> next(counts.size() + m - 1, 0.0);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      for (std::size_t extra = 0; extra < m; ++extra) {
        next[i + extra] += counts[i];
      }
    }
    counts = std::move(next);
  }
  double total = 0.0;
  for (double c : counts) {
    total += c;
  }
  // S = pairs - 2 * inversions, so S' >= s  <=>  inversions <= (pairs - s) / 2.
  const long long max_inv = (pairs - out.s) / 2;
  double tail = 0.0;
  for (long long i = 0; i <= max_inv && i < static_cast<long long>(counts.size()); ++i) {
    tail += counts[static_cast<std::size_t>(i)];
  }
  out.p_increasing = tail / total;
  return out;
}

}  // namespace crsn::stats
