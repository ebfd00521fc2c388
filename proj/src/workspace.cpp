#include "mrcert/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "mrcert/errors.hpp"
#include "mrcert/random.hpp"

namespace mrcert {

Workspace::Workspace(Rect bounds, std::vector<Rect> obstacles, std::vector<Point> starts,
                     std::vector<Point> goals)
    : bounds_(std::move(bounds)),
      obstacles_(std::move(obstacles)),
      starts_(std::move(starts)),
      goals_(std::move(goals)),
      kernels_(&simd::active_kernels()) {
  const auto problems = invariant_violations(bounds_, obstacles_, starts_, goals_);
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "invalid workspace:";
    for (const auto& p : problems) msg << "\n  " << p;
    throw ContractViolation(msg.str());
  }
  for (const Rect& r : obstacles_) soa_.push_back(r.lo()[0], r.lo()[1], r.hi()[0], r.hi()[1]);
}

std::vector<std::string> Workspace::invariant_violations(const Rect& bounds,
                                                         const std::vector<Rect>& obstacles,
                                                         const std::vector<Point>& starts,
                                                         const std::vector<Point>& goals) {
  std::vector<std::string> out;
  if (bounds.dim() != kDim) {
    out.push_back("bounds: expected 2-D, got " + std::to_string(bounds.dim()) + "-D");
    return out;
  }
  if (!(bounds.lo()[0] < bounds.hi()[0] && bounds.lo()[1] < bounds.hi()[1])) {
    out.emplace_back("bounds: empty interior");
  }
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    if (obstacles[i].dim() != kDim) out.push_back("obstacles[" + std::to_string(i) + "]: not 2-D");
  }
  if (starts.size() != goals.size()) {
    out.push_back("starts/goals: count mismatch (" + std::to_string(starts.size()) + " vs " +
                  std::to_string(goals.size()) + ")");
  }
  if (!out.empty()) return out;

  auto check = [&](const std::vector<Point>& pts, const char* name) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string where = std::string(name) + "[" + std::to_string(i) + "]";
      if (pts[i].dim() != kDim) {
        out.push_back(where + ": not 2-D");
        continue;
      }
      double gap = std::min({pts[i][0] - bounds.lo()[0], bounds.hi()[0] - pts[i][0],
                             pts[i][1] - bounds.lo()[1], bounds.hi()[1] - pts[i][1]});
      if (!(gap > 0.0)) {
        out.push_back(where + ": not strictly inside bounds");
        continue;
      }
      for (std::size_t k = 0; k < obstacles.size(); ++k) {
        if (!(dist_point_rect(pts[i], obstacles[k]) > 0.0)) {
          out.push_back(where + ": touches obstacles[" + std::to_string(k) + "]");
          break;
        }
      }
    }
  };
  check(starts, "starts");
  check(goals, "goals");
  return out;
}

double Workspace::bounds_gap(double x, double y) const noexcept {
  return std::min({x - bounds_.lo()[0], bounds_.hi()[0] - x, y - bounds_.lo()[1],
                   bounds_.hi()[1] - y});
}

double Workspace::clearance(Coords p) const {
  if (p.size() != kDim) throw ContractViolation("clearance: expected a 2-D point");
  const double gap = bounds_gap(p[0], p[1]);
  if (!(gap >= 0.0)) throw OutOfBoundsError("clearance: point outside workspace bounds");
  return std::min(std::sqrt(kernels_->min_dist_sq(soa_, p[0], p[1])), gap);
}

double Workspace::clearance_or_zero(Coords p) const {
  if (p.size() != kDim) throw ContractViolation("clearance: expected a 2-D point");
  const double gap = bounds_gap(p[0], p[1]);
  if (!(gap > 0.0)) return 0.0;
  return std::min(std::sqrt(kernels_->min_dist_sq(soa_, p[0], p[1])), gap);
}

bool Workspace::point_free(Coords p) const { return clearance_or_zero(p) > 0.0; }

bool Workspace::segment_free(Coords a, Coords b) const {
  if (a.size() != kDim || b.size() != kDim) {
    throw ContractViolation("segment_free: expected 2-D endpoints");
  }
  // Bounds are convex, so free endpoints keep the whole segment inside them.
  if (!point_free(a) || !point_free(b)) return false;
  return !kernels_->segment_hits_any(soa_, a[0], a[1], b[0], b[1]);
}

Workspace generate(const GenSpec& spec) {
  if (spec.num_obstacles < 0) throw ContractViolation("GenSpec: negative obstacle count");
  if (!(spec.size_min > 0.0 && spec.size_min <= spec.size_max && spec.size_max < 1.0)) {
    throw ContractViolation("GenSpec: need 0 < size_min <= size_max < 1");
  }
  if (spec.num_robots < 1 || spec.num_robots > kMaxRobots) {
    throw ContractViolation("GenSpec: num_robots must be in [1, 5]");
  }

  Rng rng(spec.seed);
  // Starts and goals keep this much room from each other's obstacles so that
  // no robot is generated boxed in against an obstacle face.
  constexpr double kMargin = 0.02;
  constexpr double kInset = 0.05;

  std::vector<Point> starts;
  std::vector<Point> goals;
  for (int i = 0; i < spec.num_robots; ++i) {
    starts.push_back(Point{uniform(rng, kInset, 1.0 - kInset), uniform(rng, kInset, 1.0 - kInset)});
    goals.push_back(Point{uniform(rng, kInset, 1.0 - kInset), uniform(rng, kInset, 1.0 - kInset)});
  }

  std::vector<Rect> obstacles;
  int rounds = 0;
  while (static_cast<int>(obstacles.size()) < spec.num_obstacles) {
    if (++rounds > kGenerationRounds) {
      throw GenerationError("generate: obstacle placement failed after " +
                            std::to_string(kGenerationRounds) + " rejection rounds");
    }
    const double w = uniform(rng, spec.size_min, spec.size_max);
    const double h = uniform(rng, spec.size_min, spec.size_max);
    const double x = uniform(rng, 0.0, 1.0 - w);
    const double y = uniform(rng, 0.0, 1.0 - h);
    Rect r(Point{x, y}, Point{x + w, y + h});
    const bool clear = std::all_of(starts.begin(), starts.end(),
                                   [&](const Point& p) { return dist_point_rect(p, r) > kMargin; }) &&
                       std::all_of(goals.begin(), goals.end(),
                                   [&](const Point& p) { return dist_point_rect(p, r) > kMargin; });
    if (clear) obstacles.push_back(std::move(r));
  }
  return Workspace(Rect(Point{0.0, 0.0}, Point{1.0, 1.0}), std::move(obstacles), std::move(starts),
                   std::move(goals));
}

}  // namespace mrcert
