#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace typcell {

/// Sorted sample set with a right-continuous step CDF.
class EmpiricalDistribution {
public:
  EmpiricalDistribution() = default;
  explicit EmpiricalDistribution(std::vector<double> samples);

  [[nodiscard]] const std::vector<double> &samples() const noexcept { return samples_; }
  [[nodiscard]] std::size_t count() const noexcept { return samples_.size(); }

  /// Fraction of samples <= x.
  [[nodiscard]] double cdf(double x) const;

  /// Inverse CDF with linear interpolation between order statistics.
  [[nodiscard]] double quantile(double p) const;
  [[nodiscard]] double mean() const;

  /// sup_x |F_n(x) - F(x)| for a continuous reference CDF.
  [[nodiscard]] double ks_distance(const std::function<double(double)> &reference) const;

  /// Half-width of the 95% Kolmogorov-Smirnov band, 1.3581 / sqrt(n).
  [[nodiscard]] double ks_band95() const;

private:
  std::vector<double> samples_;
};

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(const EmpiricalDistribution &a, const EmpiricalDistribution &b);

struct Interval95 {
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval for `successes` out of `n` at normal quantile z
/// (1.959964 for 95%, 2.575829 for 99%).
Interval95 wilson_interval(std::uint64_t successes, std::uint64_t n, double z = 1.959963984540054);

} // namespace typcell
