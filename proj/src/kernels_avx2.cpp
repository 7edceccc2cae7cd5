// Compiled with -mavx2 -mfma -ffp-contract=off; only entered after a
// runtime CPUID check.

#include <immintrin.h>

#include <cmath>
#include <cstdint>
#include <limits>

#include "sgnet/kernels.hpp"

namespace sgnet::kernels::avx2 {
namespace {

// Cephes double-precision log and exp, four lanes at a time.

inline __m256d polevl5(__m256d x, const double (&c)[6]) {
  __m256d y = _mm256_set1_pd(c[0]);
  for (int i = 1; i < 6; ++i) y = _mm256_add_pd(_mm256_mul_pd(y, x), _mm256_set1_pd(c[i]));
  return y;
}

inline __m256d p1evl5(__m256d x, const double (&c)[5]) {
  __m256d y = _mm256_add_pd(x, _mm256_set1_pd(c[0]));
  for (int i = 1; i < 5; ++i) y = _mm256_add_pd(_mm256_mul_pd(y, x), _mm256_set1_pd(c[i]));
  return y;
}

// Positive normal inputs only.
inline __m256d log_pd(__m256d x) {
  static constexpr double P[6] = {1.01875663804580931796E-4, 4.97494994976747001425E-1,
                                  4.70579119878881725854E0,  1.44989225341610930846E1,
                                  1.79368678507819816313E1,  7.70838733755885391666E0};
  static constexpr double Q[5] = {1.12873587189167450590E1, 4.52279145837532221105E1,
                                  8.29875266912776603211E1, 7.11544750618563894466E1,
                                  2.31251620126765340583E1};
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i biased = _mm256_and_si256(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(0x7ff));
  // int64 -> double through the 2^52 magic constant; biased is in [0, 2047].
  const __m256d magic = _mm256_set1_pd(4503599627370496.0);
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(biased, _mm256_castpd_si256(magic))), magic);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1022.0));

  const __m256i mant_bits = _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                                            _mm256_set1_epi64x(0x3FE0000000000000LL));
  __m256d m = _mm256_castsi256_pd(mant_bits);  // [0.5, 1)

  const __m256d below = _mm256_cmp_pd(m, _mm256_set1_pd(0.70710678118654752440), _CMP_LT_OQ);
  const __m256d one = _mm256_set1_pd(1.0);
  e = _mm256_sub_pd(e, _mm256_and_pd(below, one));
  m = _mm256_sub_pd(_mm256_add_pd(m, _mm256_and_pd(below, m)), one);

  const __m256d z = _mm256_mul_pd(m, m);
  __m256d y = _mm256_div_pd(_mm256_mul_pd(z, polevl5(m, P)), p1evl5(m, Q));
  y = _mm256_mul_pd(m, y);
  y = _mm256_sub_pd(y, _mm256_mul_pd(e, _mm256_set1_pd(2.121944400546905827679e-4)));
  y = _mm256_sub_pd(y, _mm256_mul_pd(_mm256_set1_pd(0.5), z));
  __m256d r = _mm256_add_pd(m, y);
  r = _mm256_add_pd(r, _mm256_mul_pd(e, _mm256_set1_pd(0.693359375)));
  return r;
}

inline __m256d exp_pd(__m256d x) {
  static constexpr double P[3] = {1.26177193074810590878E-4, 3.02994407707441961300E-2,
                                  9.99999999999999999910E-1};
  static constexpr double Q[4] = {3.00198505138664455042E-6, 2.52448340349684104192E-3,
                                  2.27265548208155028766E-1, 2.00000000000000000009E0};
  const __m256d hi = _mm256_set1_pd(709.0);
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d overflow = _mm256_cmp_pd(x, hi, _CMP_GT_OQ);
  const __m256d underflow = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

  const __m256d n = _mm256_floor_pd(
      _mm256_add_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634073599)), _mm256_set1_pd(0.5)));
  x = _mm256_sub_pd(x, _mm256_mul_pd(n, _mm256_set1_pd(6.93145751953125E-1)));
  x = _mm256_sub_pd(x, _mm256_mul_pd(n, _mm256_set1_pd(1.42860682030941723212E-6)));

  const __m256d xx = _mm256_mul_pd(x, x);
  __m256d px = _mm256_set1_pd(P[0]);
  px = _mm256_add_pd(_mm256_mul_pd(px, xx), _mm256_set1_pd(P[1]));
  px = _mm256_add_pd(_mm256_mul_pd(px, xx), _mm256_set1_pd(P[2]));
  px = _mm256_mul_pd(px, x);
  __m256d qx = _mm256_set1_pd(Q[0]);
  for (int i = 1; i < 4; ++i) qx = _mm256_add_pd(_mm256_mul_pd(qx, xx), _mm256_set1_pd(Q[i]));
  __m256d r = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  r = _mm256_add_pd(_mm256_set1_pd(1.0), _mm256_add_pd(r, r));

  // r * 2^n by adding n to the exponent field.
  const __m256i ni = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n));
  r = _mm256_castsi256_pd(_mm256_add_epi64(_mm256_castpd_si256(r), _mm256_slli_epi64(ni, 52)));

  r = _mm256_blendv_pd(r, _mm256_set1_pd(std::numeric_limits<double>::infinity()), overflow);
  r = _mm256_blendv_pd(r, _mm256_setzero_pd(), underflow);
  return r;
}

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

bool supported() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

NearestSite nearest_site(double qx, double qy, std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  NearestSite best{n, std::numeric_limits<double>::infinity()};
  std::size_t i = 0;
  if (n >= 4) {
    const __m256d vqx = _mm256_set1_pd(qx);
    const __m256d vqy = _mm256_set1_pd(qy);
    __m256d best_d2 = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    __m256d best_idx = _mm256_setzero_pd();
    __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    const __m256d step = _mm256_set1_pd(4.0);
    for (; i + 4 <= n; i += 4) {
      const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs.data() + i), vqx);
      const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys.data() + i), vqy);
      const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      const __m256d closer = _mm256_cmp_pd(d2, best_d2, _CMP_LT_OQ);
      best_d2 = _mm256_blendv_pd(best_d2, d2, closer);
      best_idx = _mm256_blendv_pd(best_idx, idx, closer);
      idx = _mm256_add_pd(idx, step);
    }
    alignas(32) double lane_d2[4];
    alignas(32) double lane_idx[4];
    _mm256_store_pd(lane_d2, best_d2);
    _mm256_store_pd(lane_idx, best_idx);
    for (int l = 0; l < 4; ++l) {
      const auto li = static_cast<std::size_t>(lane_idx[l]);
      if (lane_d2[l] < best.dist2 || (lane_d2[l] == best.dist2 && li < best.index)) best = {li, lane_d2[l]};
    }
  }
  for (; i < n; ++i) {
    const double dx = xs[i] - qx;
    const double dy = ys[i] - qy;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best.dist2) best = {i, d2};
  }
  return best;
}

void squared_norms(std::span<const double> xs, std::span<const double> ys, std::span<double> out) {
  const std::size_t n = xs.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(xs.data() + i);
    const __m256d y = _mm256_loadu_pd(ys.data() + i);
    _mm256_storeu_pd(out.data() + i, _mm256_add_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y)));
  }
  for (; i < n; ++i) out[i] = xs[i] * xs[i] + ys[i] * ys[i];
}

double weighted_power_sum(std::span<const double> r2, std::span<const double> weights, double half_beta) {
  const std::size_t n = r2.size();
  const __m256d neg_h = _mm256_set1_pd(-half_beta);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = zero;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d w = _mm256_loadu_pd(weights.data() + i);
    const __m256d live = _mm256_cmp_pd(w, zero, _CMP_NEQ_UQ);
    // Dead lanes get r2 = 1 so log/exp stay finite; their weight is zero.
    const __m256d r = _mm256_blendv_pd(one, _mm256_loadu_pd(r2.data() + i), live);
    const __m256d term = exp_pd(_mm256_mul_pd(neg_h, log_pd(r)));
    acc = _mm256_add_pd(acc, _mm256_and_pd(live, _mm256_mul_pd(w, term)));
  }
  double sum = horizontal_sum(acc);
  for (; i < n; ++i) {
    if (weights[i] != 0.0) sum += weights[i] * std::pow(r2[i], -half_beta);
  }
  return sum;
}

}  // namespace sgnet::kernels::avx2
