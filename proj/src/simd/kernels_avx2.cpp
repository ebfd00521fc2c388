// Compiled with -mavx2 only; selected at runtime when the CPU reports AVX2.
#include <immintrin.h>

#include <algorithm>
#include <limits>

#include "mrcert/simd/kernels.hpp"

namespace mrcert::simd::detail {
namespace {

inline double hmin(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_min_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_min_sd(m, _mm_unpackhi_pd(m, m)));
}

// Per-lane parameter interval [enter, exit] clipped against one slab.
inline void clip_axis(__m256d lo, __m256d hi, __m256d a, __m256d d, __m256d& enter,
                      __m256d& exit) {
  const __m256d t1 = _mm256_div_pd(_mm256_sub_pd(lo, a), d);
  const __m256d t2 = _mm256_div_pd(_mm256_sub_pd(hi, a), d);
  enter = _mm256_max_pd(enter, _mm256_min_pd(t1, t2));
  exit = _mm256_min_pd(exit, _mm256_max_pd(t1, t2));
}

// Lanes whose slab [lo, hi] contains the fixed coordinate a.
inline __m256d slab_contains(__m256d lo, __m256d hi, __m256d a) {
  return _mm256_and_pd(_mm256_cmp_pd(lo, a, _CMP_LE_OQ), _mm256_cmp_pd(a, hi, _CMP_LE_OQ));
}

}  // namespace

double min_dist_sq_avx2(const RectSoA& r, double x, double y) {
  const std::size_t n = r.size();
  const __m256d vx = _mm256_set1_pd(x);
  const __m256d vy = _mm256_set1_pd(y);
  const __m256d zero = _mm256_setzero_pd();
  __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gx = _mm256_max_pd(_mm256_max_pd(_mm256_sub_pd(_mm256_loadu_pd(&r.lo_x[i]), vx),
                                                   _mm256_sub_pd(vx, _mm256_loadu_pd(&r.hi_x[i]))),
                                     zero);
    const __m256d gy = _mm256_max_pd(_mm256_max_pd(_mm256_sub_pd(_mm256_loadu_pd(&r.lo_y[i]), vy),
                                                   _mm256_sub_pd(vy, _mm256_loadu_pd(&r.hi_y[i]))),
                                     zero);
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(gx, gx), _mm256_mul_pd(gy, gy));
    best = _mm256_min_pd(best, d2);
  }
  double out = hmin(best);
  for (; i < n; ++i) out = std::min(out, rect_dist_sq(r, i, x, y));
  return out;
}

bool segment_hits_any_avx2(const RectSoA& r, double ax, double ay, double bx, double by) {
  const std::size_t n = r.size();
  const double dx = bx - ax;
  const double dy = by - ay;
  const __m256d vax = _mm256_set1_pd(ax);
  const __m256d vay = _mm256_set1_pd(ay);
  const __m256d vdx = _mm256_set1_pd(dx);
  const __m256d vdy = _mm256_set1_pd(dy);
  const __m256d all = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d lx = _mm256_loadu_pd(&r.lo_x[i]);
    const __m256d ly = _mm256_loadu_pd(&r.lo_y[i]);
    const __m256d hx = _mm256_loadu_pd(&r.hi_x[i]);
    const __m256d hy = _mm256_loadu_pd(&r.hi_y[i]);
    __m256d enter = _mm256_setzero_pd();
    __m256d exit = _mm256_set1_pd(1.0);
    __m256d alive = all;
    if (dx == 0.0) {
      alive = _mm256_and_pd(alive, slab_contains(lx, hx, vax));
    } else {
      clip_axis(lx, hx, vax, vdx, enter, exit);
    }
    if (dy == 0.0) {
      alive = _mm256_and_pd(alive, slab_contains(ly, hy, vay));
    } else {
      clip_axis(ly, hy, vay, vdy, enter, exit);
    }
    const __m256d hit = _mm256_and_pd(alive, _mm256_cmp_pd(enter, exit, _CMP_LE_OQ));
    if (_mm256_movemask_pd(hit) != 0) return true;
  }
  for (; i < n; ++i) {
    if (segment_hits_rect(r, i, ax, ay, dx, dy)) return true;
  }
  return false;
}

}  // namespace mrcert::simd::detail
