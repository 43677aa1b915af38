#include <immintrin.h>

#include <cmath>
#include <limits>

#include "typcell/kernels.hpp"

namespace typcell::kernels::avx2 {

namespace {

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kLog2e = 1.44269504088896338700e+00;
constexpr double kSqrt2 = 1.41421356237309504880;

// Natural log for positive, finite, normal lanes. x = m * 2^e with m in
// [sqrt(1/2), sqrt(2)); log(m) = 2 atanh(f), f = (m-1)/(m+1), |f| < 0.1716.
inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

  // Biased exponent as a double through the 2^52 magic constant.
  const __m256i biased = _mm256_srli_epi64(bits, 52);
  const __m256d magic = _mm256_set1_pd(4503599627370496.0);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, _mm256_castpd_si256(magic))), magic);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));

  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(kSqrt2), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d f = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d s = _mm256_mul_pd(f, f);

  // 1 + s/3 + s^2/5 + ... + s^11/23; s <= 0.0295 so s^12/25 < 1e-19.
  __m256d p = _mm256_set1_pd(1.0 / 23.0);
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 21.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 19.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 17.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 15.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 13.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 11.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 9.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 7.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 5.0));
  p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(1.0 / 3.0));
  // log(m) = 2f + 2f*s*q(s)
  const __m256d two_f = _mm256_add_pd(f, f);
  const __m256d tail = _mm256_mul_pd(_mm256_mul_pd(two_f, s), p);

  const __m256d lo = _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Lo), tail);
  return _mm256_add_pd(_mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Hi), two_f), lo);
}

// exp with x = k ln2 + r, |r| <= ln2/2, Taylor to degree 13. Lanes below
// -708 flush to zero; lanes above 709 saturate at exp(709).
inline __m256d exp_pd(__m256d x) {
  const __m256d underflow = _mm256_cmp_pd(x, _mm256_set1_pd(-708.0), _CMP_LT_OQ);
  x = _mm256_min_pd(x, _mm256_set1_pd(709.0));
  x = _mm256_max_pd(x, _mm256_set1_pd(-708.0));

  const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kLog2e)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kLn2Hi), x);
  r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kLn2Lo), r);

  __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  // 2^k: k + 1023 lands in [1, 2046]; place it in the exponent field.
  const __m256d magic = _mm256_set1_pd(4503599627370496.0);
  const __m256i biased =
      _mm256_castpd_si256(_mm256_add_pd(_mm256_add_pd(k, _mm256_set1_pd(1023.0)), magic));
  const __m256i scale_bits = _mm256_slli_epi64(biased, 52);
  const __m256d scaled = _mm256_mul_pd(p, _mm256_castsi256_pd(scale_bits));
  return _mm256_andnot_pd(underflow, scaled);
}

enum class PowMode { integer, half_integer, general };

struct PowPlan {
  PowMode mode;
  int whole;
  double p;
};

PowPlan plan_pow(double p) {
  const double twice = 2.0 * p;
  if (twice == std::floor(twice) && p >= 0.5 && p <= 16.0) {
    const int whole = static_cast<int>(std::floor(p));
    return {(twice == 2.0 * whole) ? PowMode::integer : PowMode::half_integer, whole, p};
  }
  return {PowMode::general, 0, p};
}

inline __m256d ipow(__m256d x, int n) {
  __m256d acc = _mm256_set1_pd(1.0);
  for (int i = 0; i < n; ++i) {
    acc = _mm256_mul_pd(acc, x);
  }
  return acc;
}

// x^(-p) lane-wise.
inline __m256d pow_neg_pd(__m256d x, const PowPlan &plan) {
  switch (plan.mode) {
  case PowMode::integer:
    return _mm256_div_pd(_mm256_set1_pd(1.0), ipow(x, plan.whole));
  case PowMode::half_integer:
    return _mm256_div_pd(_mm256_set1_pd(1.0), _mm256_mul_pd(ipow(x, plan.whole), _mm256_sqrt_pd(x)));
  case PowMode::general:
  default:
    return exp_pd(_mm256_mul_pd(_mm256_set1_pd(-plan.p), log_pd(x)));
  }
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

} // namespace

void pow_neg(std::span<const double> x, double p, std::span<double> out) {
  const PowPlan plan = plan_pow(p);
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) {
    _mm256_storeu_pd(out.data() + i, pow_neg_pd(_mm256_loadu_pd(x.data() + i), plan));
  }
  for (; i < x.size(); ++i) {
    out[i] = std::pow(x[i], -p);
  }
}

void neg_log(std::span<const double> u, std::span<double> out) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= u.size(); i += 4) {
    _mm256_storeu_pd(out.data() + i, _mm256_sub_pd(zero, log_pd(_mm256_loadu_pd(u.data() + i))));
  }
  for (; i < u.size(); ++i) {
    out[i] = -std::log(u[i]);
  }
}

double path_gain_sum_2d(std::span<const double> x, std::span<const double> y, std::span<const double> fading,
                        double ux, double uy, double alpha) {
  const PowPlan plan = plan_pow(0.5 * alpha);
  const __m256d vux = _mm256_set1_pd(ux);
  const __m256d vuy = _mm256_set1_pd(uy);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), vux);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y.data() + i), vuy);
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(fading.data() + i), pow_neg_pd(d2, plan), acc);
  }
  double sum = hsum(acc);
  for (; i < x.size(); ++i) {
    const double dx = x[i] - ux;
    const double dy = y[i] - uy;
    sum += fading[i] * std::pow(dx * dx + dy * dy, -0.5 * alpha);
  }
  return sum;
}

double path_gain_sum_1d(std::span<const double> x, std::span<const double> fading, double u, double alpha) {
  const PowPlan plan = plan_pow(0.5 * alpha);
  const __m256d vu = _mm256_set1_pd(u);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), vu);
    const __m256d d2 = _mm256_mul_pd(d, d);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(fading.data() + i), pow_neg_pd(d2, plan), acc);
  }
  double sum = hsum(acc);
  for (; i < x.size(); ++i) {
    const double d = x[i] - u;
    sum += fading[i] * std::pow(d * d, -0.5 * alpha);
  }
  return sum;
}

Nearest nearest_2d(std::span<const double> x, std::span<const double> y, double ux, double uy) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const __m256d vux = _mm256_set1_pd(ux);
  const __m256d vuy = _mm256_set1_pd(uy);
  __m256d best = _mm256_set1_pd(inf);
  __m256d best_idx = _mm256_setzero_pd();
  __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  const __m256d step = _mm256_set1_pd(4.0);
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), vux);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y.data() + i), vuy);
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const __m256d closer = _mm256_cmp_pd(d2, best, _CMP_LT_OQ);
    best = _mm256_blendv_pd(best, d2, closer);
    best_idx = _mm256_blendv_pd(best_idx, idx, closer);
    idx = _mm256_add_pd(idx, step);
  }

  alignas(32) double lane_d2[4];
  alignas(32) double lane_idx[4];
  _mm256_store_pd(lane_d2, best);
  _mm256_store_pd(lane_idx, best_idx);
  Nearest out{0, inf};
  for (int l = 0; l < 4; ++l) {
    const auto li = static_cast<std::size_t>(lane_idx[l]);
    if (lane_d2[l] < out.distance2 || (lane_d2[l] == out.distance2 && li < out.index)) {
      out = {li, lane_d2[l]};
    }
  }
  for (; i < x.size(); ++i) {
    const double dx = x[i] - ux;
    const double dy = y[i] - uy;
    const double d2 = dx * dx + dy * dy;
    if (d2 < out.distance2) {
      out = {i, d2};
    }
  }
  return out;
}

} // namespace typcell::kernels::avx2
