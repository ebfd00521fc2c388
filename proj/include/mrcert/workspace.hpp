#pragma once
// The shared planar environment every robot of the team moves in.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mrcert/geometry.hpp"
#include "mrcert/simd/kernels.hpp"

namespace mrcert {

/// Bounded 2-D workspace with axis-aligned rectangular obstacles (which may
/// overlap) and one start/goal pair per robot. Immutable after construction.
///
/// The bounds boundary behaves like an obstacle: clearance is capped by the
/// distance to the nearest face, and a point with zero clearance is in
/// collision. This keeps any ball of radius clearance(p) around p free.
class Workspace {
 public:
  static constexpr std::size_t kDim = 2;

  /// Throws ContractViolation listing every broken invariant.
  Workspace(Rect bounds, std::vector<Rect> obstacles, std::vector<Point> starts,
            std::vector<Point> goals);

  /// Invariant violations of the given parts, empty when they form a valid workspace.
  static std::vector<std::string> invariant_violations(const Rect& bounds,
                                                       const std::vector<Rect>& obstacles,
                                                       const std::vector<Point>& starts,
                                                       const std::vector<Point>& goals);

  [[nodiscard]] const Rect& bounds() const noexcept { return bounds_; }
  [[nodiscard]] const std::vector<Rect>& obstacles() const noexcept { return obstacles_; }
  [[nodiscard]] const std::vector<Point>& starts() const noexcept { return starts_; }
  [[nodiscard]] const std::vector<Point>& goals() const noexcept { return goals_; }
  [[nodiscard]] std::size_t max_robots() const noexcept { return starts_.size(); }

  /// Distance to the nearest obstacle or bounds face; 0 inside an obstacle.
  /// Throws OutOfBoundsError when p lies outside the closed bounds.
  [[nodiscard]] double clearance(Coords p) const;
  /// As clearance(), but returns 0 for points outside the bounds.
  [[nodiscard]] double clearance_or_zero(Coords p) const;
  [[nodiscard]] bool point_free(Coords p) const;
  [[nodiscard]] bool segment_free(Coords a, Coords b) const;
  [[nodiscard]] bool segment_free(const Segment& s) const { return segment_free(s.a, s.b); }

  friend bool operator==(const Workspace& a, const Workspace& b) {
    return a.bounds_ == b.bounds_ && a.obstacles_ == b.obstacles_ && a.starts_ == b.starts_ &&
           a.goals_ == b.goals_;
  }

 private:
  [[nodiscard]] double bounds_gap(double x, double y) const noexcept;

  Rect bounds_;
  std::vector<Rect> obstacles_;
  std::vector<Point> starts_;
  std::vector<Point> goals_;
  simd::RectSoA soa_;
  const simd::KernelTable* kernels_;
};

/// Parameters for random workspace generation in the unit square.
struct GenSpec {
  std::uint64_t seed = 7;
  int num_obstacles = 40;
  /// Obstacle side lengths, as fractions of the bounds extent on each axis.
  double size_min = 0.02;
  double size_max = 0.10;
  int num_robots = 5;
};

inline constexpr int kMaxRobots = 5;
inline constexpr int kGenerationRounds = 10'000;

/// Deterministic in spec. Throws ContractViolation on an invalid spec and
/// GenerationError when rejection sampling exceeds kGenerationRounds.
[[nodiscard]] Workspace generate(const GenSpec& spec);

/// JSON encoding; numbers carry 17 significant digits so reading back is exact.
[[nodiscard]] std::string write_workspace(const Workspace& w);
/// Throws ParseError with line/field diagnostics.
[[nodiscard]] Workspace read_workspace(std::string_view text);

[[nodiscard]] Workspace load_workspace(const std::string& path);
void save_workspace(const Workspace& w, const std::string& path);

}  // namespace mrcert
