#include <cmath>
#include <limits>

#include "typcell/kernels.hpp"

namespace typcell::kernels::scalar {

double path_gain_sum_2d(std::span<const double> x, std::span<const double> y, std::span<const double> fading,
                        double ux, double uy, double alpha) {
  const double half_alpha = 0.5 * alpha;
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - ux;
    const double dy = y[i] - uy;
    const double d2 = dx * dx + dy * dy;
    sum += fading[i] * std::pow(d2, -half_alpha);
  }
  return sum;
}

double path_gain_sum_1d(std::span<const double> x, std::span<const double> fading, double u, double alpha) {
  const double half_alpha = 0.5 * alpha;
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - u;
    sum += fading[i] * std::pow(d * d, -half_alpha);
  }
  return sum;
}

Nearest nearest_2d(std::span<const double> x, std::span<const double> y, double ux, double uy) {
  Nearest best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - ux;
    const double dy = y[i] - uy;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best.distance2) {
      best = {i, d2};
    }
  }
  return best;
}

void neg_log(std::span<const double> u, std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = -std::log(u[i]);
  }
}

} // namespace typcell::kernels::scalar
