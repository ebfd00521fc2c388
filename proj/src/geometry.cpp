#include "mrcert/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mrcert/errors.hpp"

namespace mrcert {
namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ContractViolation(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                            " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  for (double c : coords_) {
    if (!std::isfinite(c)) throw ContractViolation("Point: non-finite coordinate");
  }
}

Point::Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

Rect::Rect(Point lo, Point hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  require_same_dim(lo_.dim(), hi_.dim(), "Rect");
  for (std::size_t k = 0; k < lo_.dim(); ++k) {
    if (lo_[k] > hi_[k]) throw ContractViolation("Rect: lo exceeds hi on axis " + std::to_string(k));
  }
}

bool Rect::contains(Coords p) const {
  require_same_dim(p.size(), dim(), "Rect::contains");
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] < lo_[k] || p[k] > hi_[k]) return false;
  }
  return true;
}

double dist_sq(Coords a, Coords b) {
  require_same_dim(a.size(), b.size(), "dist");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

double dist(Coords a, Coords b) { return std::sqrt(dist_sq(a, b)); }

double dist_sq_point_box(Coords p, Coords lo, Coords hi) {
  require_same_dim(p.size(), lo.size(), "dist_point_rect");
  require_same_dim(p.size(), hi.size(), "dist_point_rect");
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double gap = std::max(std::max(lo[k] - p[k], p[k] - hi[k]), 0.0);
    s += gap * gap;
  }
  return s;
}

double dist_point_rect(Coords p, const Rect& r) {
  return std::sqrt(dist_sq_point_box(p, r.lo(), r.hi()));
}

bool segment_intersects_rect(Coords a, Coords b, const Rect& r) {
  require_same_dim(a.size(), b.size(), "segment_intersects_rect");
  require_same_dim(a.size(), r.dim(), "segment_intersects_rect");
  // Liang-Barsky slab clipping over the parameter interval [0, 1].
  double t_enter = 0.0;
  double t_exit = 1.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = b[k] - a[k];
    if (d == 0.0) {
      if (a[k] < r.lo()[k] || a[k] > r.hi()[k]) return false;
      continue;
    }
    const double t1 = (r.lo()[k] - a[k]) / d;
    const double t2 = (r.hi()[k] - a[k]) / d;
    t_enter = std::max(t_enter, std::min(t1, t2));
    t_exit = std::min(t_exit, std::max(t1, t2));
  }
  return t_enter <= t_exit;
}

}  // namespace mrcert
