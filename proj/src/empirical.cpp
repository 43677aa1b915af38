#include "typcell/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace typcell {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples) : samples_(std::move(samples)) {
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::cdf(double x) const {
  if (samples_.empty()) {
    return 0.0;
  }
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::quantile(double p) const {
  if (samples_.empty()) {
    throw std::logic_error("quantile of an empty sample");
  }
  p = std::clamp(p, 0.0, 1.0);
  const double pos = p * static_cast<double>(samples_.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, samples_.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return samples_[lo] + frac * (samples_[hi] - samples_[lo]);
}

double EmpiricalDistribution::mean() const {
  if (samples_.empty()) {
    return 0.0;
  }
  return std::accumulate(samples_.begin(), samples_.end(), 0.0) / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::ks_distance(const std::function<double(double)> &reference) const {
  const double n = static_cast<double>(samples_.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const double f = reference(samples_[i]);
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(i + 1) / n;
    worst = std::max({worst, std::abs(f - below), std::abs(above - f)});
  }
  return worst;
}

double EmpiricalDistribution::ks_band95() const {
  return 1.3581 / std::sqrt(static_cast<double>(std::max<std::size_t>(samples_.size(), 1)));
}

double ks_two_sample(const EmpiricalDistribution &a, const EmpiricalDistribution &b) {
  const auto &x = a.samples();
  const auto &y = b.samples();
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double worst = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) {
      ++i;
    }
    while (j < y.size() && y[j] <= v) {
      ++j;
    }
    worst = std::max(worst, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return worst;
}

Interval95 wilson_interval(std::uint64_t successes, std::uint64_t n, double z) {
  if (n == 0) {
    return {0.0, 1.0};
  }
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

} // namespace typcell
