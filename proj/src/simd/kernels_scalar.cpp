#include <algorithm>
#include <limits>

#include "mrcert/simd/kernels.hpp"

namespace mrcert::simd::detail {

double rect_dist_sq(const RectSoA& r, std::size_t i, double x, double y) {
  const double gx = std::max(std::max(r.lo_x[i] - x, x - r.hi_x[i]), 0.0);
  const double gy = std::max(std::max(r.lo_y[i] - y, y - r.hi_y[i]), 0.0);
  return gx * gx + gy * gy;
}

bool segment_hits_rect(const RectSoA& r, std::size_t i, double ax, double ay, double dx,
                       double dy) {
  double t_enter = 0.0;
  double t_exit = 1.0;
  if (dx == 0.0) {
    if (ax < r.lo_x[i] || ax > r.hi_x[i]) return false;
  } else {
    const double t1 = (r.lo_x[i] - ax) / dx;
    const double t2 = (r.hi_x[i] - ax) / dx;
    t_enter = std::max(t_enter, std::min(t1, t2));
    t_exit = std::min(t_exit, std::max(t1, t2));
  }
  if (dy == 0.0) {
    if (ay < r.lo_y[i] || ay > r.hi_y[i]) return false;
  } else {
    const double t1 = (r.lo_y[i] - ay) / dy;
    const double t2 = (r.hi_y[i] - ay) / dy;
    t_enter = std::max(t_enter, std::min(t1, t2));
    t_exit = std::min(t_exit, std::max(t1, t2));
  }
  return t_enter <= t_exit;
}

double min_dist_sq_scalar(const RectSoA& r, double x, double y) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.size(); ++i) best = std::min(best, rect_dist_sq(r, i, x, y));
  return best;
}

bool segment_hits_any_scalar(const RectSoA& r, double ax, double ay, double bx, double by) {
  const double dx = bx - ax;
  const double dy = by - ay;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (segment_hits_rect(r, i, ax, ay, dx, dy)) return true;
  }
  return false;
}

}  // namespace mrcert::simd::detail
