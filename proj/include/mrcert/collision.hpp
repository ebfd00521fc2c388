#pragma once
// Timed wrapper around the workspace's standard collision queries. Everything
// that passes through here counts as "standard collision checking" in the
// runtime metrics; certificate tests and kd-tree traversal do not.

#include <chrono>
#include <cstdint>

#include "mrcert/workspace.hpp"

namespace mrcert {

class StandardChecker {
 public:
  using Clock = std::chrono::steady_clock;

  explicit StandardChecker(const Workspace& w) : w_(&w) {}

  [[nodiscard]] const Workspace& workspace() const noexcept { return *w_; }

  /// Clearance of one robot position; 0 when in collision or out of bounds.
  double clearance(Coords p) {
    const auto t0 = Clock::now();
    const double c = w_->clearance_or_zero(p);
    elapsed_ += Clock::now() - t0;
    ++clearance_calls_;
    return c;
  }

  bool segment_free(Coords a, Coords b) {
    const auto t0 = Clock::now();
    const bool ok = w_->segment_free(a, b);
    elapsed_ += Clock::now() - t0;
    ++segment_calls_;
    return ok;
  }

  [[nodiscard]] double seconds() const noexcept {
    return std::chrono::duration<double>(elapsed_).count();
  }
  [[nodiscard]] std::uint64_t clearance_calls() const noexcept { return clearance_calls_; }
  [[nodiscard]] std::uint64_t segment_calls() const noexcept { return segment_calls_; }

 private:
  const Workspace* w_;
  Clock::duration elapsed_{};
  std::uint64_t clearance_calls_ = 0;
  std::uint64_t segment_calls_ = 0;
};

}  // namespace mrcert
