// AArch64 variant. Built only when targeting aarch64, where NEON is baseline.
#include <arm_neon.h>

#include <algorithm>
#include <limits>

#include "mrcert/simd/kernels.hpp"

namespace mrcert::simd::detail {

double min_dist_sq_neon(const RectSoA& r, double x, double y) {
  const std::size_t n = r.size();
  const float64x2_t vx = vdupq_n_f64(x);
  const float64x2_t vy = vdupq_n_f64(y);
  const float64x2_t zero = vdupq_n_f64(0.0);
  float64x2_t best = vdupq_n_f64(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t gx = vmaxq_f64(
        vmaxq_f64(vsubq_f64(vld1q_f64(&r.lo_x[i]), vx), vsubq_f64(vx, vld1q_f64(&r.hi_x[i]))), zero);
    const float64x2_t gy = vmaxq_f64(
        vmaxq_f64(vsubq_f64(vld1q_f64(&r.lo_y[i]), vy), vsubq_f64(vy, vld1q_f64(&r.hi_y[i]))), zero);
    best = vminq_f64(best, vaddq_f64(vmulq_f64(gx, gx), vmulq_f64(gy, gy)));
  }
  double out = vminvq_f64(best);
  for (; i < n; ++i) out = std::min(out, rect_dist_sq(r, i, x, y));
  return out;
}

bool segment_hits_any_neon(const RectSoA& r, double ax, double ay, double bx, double by) {
  const std::size_t n = r.size();
  const double dx = bx - ax;
  const double dy = by - ay;
  const float64x2_t vax = vdupq_n_f64(ax);
  const float64x2_t vay = vdupq_n_f64(ay);
  const float64x2_t vdx = vdupq_n_f64(dx);
  const float64x2_t vdy = vdupq_n_f64(dy);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t lx = vld1q_f64(&r.lo_x[i]);
    const float64x2_t ly = vld1q_f64(&r.lo_y[i]);
    const float64x2_t hx = vld1q_f64(&r.hi_x[i]);
    const float64x2_t hy = vld1q_f64(&r.hi_y[i]);
    float64x2_t enter = vdupq_n_f64(0.0);
    float64x2_t exit = vdupq_n_f64(1.0);
    uint64x2_t alive = vdupq_n_u64(~0ULL);
    if (dx == 0.0) {
      alive = vandq_u64(alive, vandq_u64(vcleq_f64(lx, vax), vcleq_f64(vax, hx)));
    } else {
      const float64x2_t t1 = vdivq_f64(vsubq_f64(lx, vax), vdx);
      const float64x2_t t2 = vdivq_f64(vsubq_f64(hx, vax), vdx);
      enter = vmaxq_f64(enter, vminq_f64(t1, t2));
      exit = vminq_f64(exit, vmaxq_f64(t1, t2));
    }
    if (dy == 0.0) {
      alive = vandq_u64(alive, vandq_u64(vcleq_f64(ly, vay), vcleq_f64(vay, hy)));
    } else {
      const float64x2_t t1 = vdivq_f64(vsubq_f64(ly, vay), vdy);
      const float64x2_t t2 = vdivq_f64(vsubq_f64(hy, vay), vdy);
      enter = vmaxq_f64(enter, vminq_f64(t1, t2));
      exit = vminq_f64(exit, vmaxq_f64(t1, t2));
    }
    const uint64x2_t hit = vandq_u64(alive, vcleq_f64(enter, exit));
    if ((vgetq_lane_u64(hit, 0) | vgetq_lane_u64(hit, 1)) != 0) return true;
  }
  for (; i < n; ++i) {
    if (segment_hits_rect(r, i, ax, ay, dx, dy)) return true;
  }
  return false;
}

}  // namespace mrcert::simd::detail
