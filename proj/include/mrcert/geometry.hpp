#pragma once
// Points, segments and axis-aligned rectangles in R^k, with exact distance and
// intersection predicates. All queries accept spans so that slices of a
// flattened team configuration can be passed without copying.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mrcert {

using Coords = std::span<const double>;

/// Owning k-dimensional point. Coordinates are always finite.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords);

  [[nodiscard]] std::size_t dim() const noexcept { return coords_.size(); }
  [[nodiscard]] double operator[](std::size_t k) const { return coords_[k]; }
  [[nodiscard]] Coords coords() const noexcept { return coords_; }
  operator Coords() const noexcept { return coords_; }  // NOLINT(google-explicit-constructor)

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

/// Closed axis-aligned box, lo[k] <= hi[k] on every axis.
class Rect {
 public:
  Rect() = default;
  Rect(Point lo, Point hi);

  [[nodiscard]] const Point& lo() const noexcept { return lo_; }
  [[nodiscard]] const Point& hi() const noexcept { return hi_; }
  [[nodiscard]] std::size_t dim() const noexcept { return lo_.dim(); }
  [[nodiscard]] bool contains(Coords p) const;

  friend bool operator==(const Rect&, const Rect&) = default;

 private:
  Point lo_;
  Point hi_;
};

struct Segment {
  Point a;
  Point b;
};

/// Squared Euclidean distance, summed axis by axis in index order.
[[nodiscard]] double dist_sq(Coords a, Coords b);
[[nodiscard]] double dist(Coords a, Coords b);

/// Squared distance from p to the closed box [lo, hi]; 0 inside or on the boundary.
[[nodiscard]] double dist_sq_point_box(Coords p, Coords lo, Coords hi);
[[nodiscard]] double dist_point_rect(Coords p, const Rect& r);

/// True iff some point of the closed segment a-b lies in the closed rectangle.
[[nodiscard]] bool segment_intersects_rect(Coords a, Coords b, const Rect& r);
[[nodiscard]] inline bool segment_intersects_rect(const Segment& s, const Rect& r) {
  return segment_intersects_rect(s.a, s.b, r);
}

}  // namespace mrcert
