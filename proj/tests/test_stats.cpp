#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "crsn/stats.hpp"

using namespace crsn::stats;

TEST_CASE("mean and sample_std") {
  const std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
  CHECK(mean(v) == doctest::Approx(5.0));
  CHECK(sample_std(v) == doctest::Approx(2.138089935));
  CHECK(sample_std(std::vector<double>{3.0}) == 0.0);
}

TEST_CASE("linear_fit") {
  const std::vector<double> x{20, 40, 60, 80, 100};
  const std::vector<double> y{15, 33, 51, 69, 87};
  const LinearFit fit = linear_fit(x, y);
  CHECK(fit.slope == doctest::Approx(0.9));
  CHECK(fit.intercept == doctest::Approx(-3.0));
  CHECK(fit.r_squared == doctest::Approx(1.0));

  const std::vector<double> noisy{1, 3, 2, 5, 4};
  CHECK(linear_fit(x, noisy).r_squared < 0.9);
}

TEST_CASE("kendall_trend p-values match permutation enumeration") {
  // Oracle: enumerate all 6! orderings and count those with S at least as large.
  auto s_of = [](const std::vector<double>& v) {
    long long s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = i + 1; j < v.size(); ++j) {
        s += (v[j] > v[i]) - (v[j] < v[i]);
      }
    }
    return s;
  };
  const std::vector<std::vector<double>> cases{
      {1, 2, 3, 4, 5, 6}, {2, 1, 3, 4, 6, 5}, {6, 5, 4, 3, 2, 1}, {3, 1, 4, 6, 5, 2}};
  for (const auto& values : cases) {
    const long long s = s_of(values);
    std::vector<double> perm{1, 2, 3, 4, 5, 6};
    int at_least = 0;
    int total = 0;
    do {
      ++total;
      at_least += s_of(perm) >= s;
    } while (std::next_permutation(perm.begin(), perm.end()));
    const KendallTrend trend = kendall_trend(values);
    CHECK(trend.s == s);
    CHECK(trend.p_increasing == doctest::Approx(static_cast<double>(at_least) / total));
  }
}

TEST_CASE("kendall_trend on ten points") {
  std::vector<double> up(10);
  std::iota(up.begin(), up.end(), 0.0);
  const KendallTrend t = kendall_trend(up);
  CHECK(t.tau == 1.0);
  CHECK(t.p_increasing == doctest::Approx(1.0 / 3628800.0));

  std::vector<double> down(up.rbegin(), up.rend());
  CHECK(kendall_trend(down).p_increasing == doctest::Approx(1.0));
}
