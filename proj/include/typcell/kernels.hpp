#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace typcell::kernels {

// Inner loops of the simulator. Every kernel has a scalar reference and, on
// x86-64, an AVX2/FMA variant; the variant is picked once at startup from the
// CPU features. TYPCELL_SIMD=scalar in the environment forces the reference.

enum class Isa { scalar, avx2 };

struct Nearest {
  std::size_t index = 0;
  double distance2 = 0.0;
};

/// sum_i h_i * ((x_i - ux)^2 + (y_i - uy)^2)^(-alpha/2)
using PathGainSum2d = double (*)(std::span<const double> x, std::span<const double> y,
                                 std::span<const double> fading, double ux, double uy, double alpha);
/// sum_i h_i * |x_i - u|^(-alpha)
using PathGainSum1d = double (*)(std::span<const double> x, std::span<const double> fading, double u,
                                 double alpha);
/// Index and squared distance of the point closest to (ux, uy); first index on ties.
using Nearest2d = Nearest (*)(std::span<const double> x, std::span<const double> y, double ux, double uy);
/// out_i = -log(u_i) for u_i in (0, 1]; turns uniforms into unit exponentials.
using NegLog = void (*)(std::span<const double> u, std::span<double> out);

struct KernelTable {
  Isa isa;
  PathGainSum2d path_gain_sum_2d;
  PathGainSum1d path_gain_sum_1d;
  Nearest2d nearest_2d;
  NegLog neg_log;
};

namespace scalar {
double path_gain_sum_2d(std::span<const double> x, std::span<const double> y, std::span<const double> fading,
                        double ux, double uy, double alpha);
double path_gain_sum_1d(std::span<const double> x, std::span<const double> fading, double u, double alpha);
Nearest nearest_2d(std::span<const double> x, std::span<const double> y, double ux, double uy);
void neg_log(std::span<const double> u, std::span<double> out);
} // namespace scalar

#if defined(TYPCELL_WITH_AVX2)
namespace avx2 {
double path_gain_sum_2d(std::span<const double> x, std::span<const double> y, std::span<const double> fading,
                        double ux, double uy, double alpha);
double path_gain_sum_1d(std::span<const double> x, std::span<const double> fading, double u, double alpha);
Nearest nearest_2d(std::span<const double> x, std::span<const double> y, double ux, double uy);
void neg_log(std::span<const double> u, std::span<double> out);

/// Lane-wise x^(-p) for x > 0 (exposed for the equivalence tests).
void pow_neg(std::span<const double> x, double p, std::span<double> out);
} // namespace avx2
#endif

/// Table for a specific ISA; nullptr when that ISA is unavailable on this
/// build or CPU.
const KernelTable *table_for(Isa isa);

/// The table selected at startup.
const KernelTable &active();

std::string_view isa_name(Isa isa);

inline double path_gain_sum_2d(std::span<const double> x, std::span<const double> y,
                               std::span<const double> fading, double ux, double uy, double alpha) {
  return active().path_gain_sum_2d(x, y, fading, ux, uy, alpha);
}

inline double path_gain_sum_1d(std::span<const double> x, std::span<const double> fading, double u,
                               double alpha) {
  return active().path_gain_sum_1d(x, fading, u, alpha);
}

inline Nearest nearest_2d(std::span<const double> x, std::span<const double> y, double ux, double uy) {
  return active().nearest_2d(x, y, ux, uy);
}

inline void neg_log(std::span<const double> u, std::span<double> out) { active().neg_log(u, out); }

} // namespace typcell::kernels
