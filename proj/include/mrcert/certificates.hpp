#pragma once
// Collision-check strategies for a team of point robots sharing one planar
// workspace. A team configuration is the concatenation of R robot positions;
// each strategy decides whether it is collision free while trying to avoid
// standard clearance calls by reusing clearance balls ("certificates") that
// were recorded at earlier planner nodes.
//
//   none     every robot is checked, nothing is recorded
//   basic    one certificate per node: the product of R balls, all from the
//            same node; any robot outside its ball forces a full team check
//   partial  R independent certificate pointers per node; only robots outside
//            their referenced ball are checked
//   shared   all robots' balls live in one 2-D kd-tree, so any robot's ball
//            may certify any other robot

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "mrcert/collision.hpp"
#include "mrcert/geometry.hpp"
#include "mrcert/kdtree.hpp"

namespace mrcert {

inline constexpr std::size_t kRobotDim = 2;

/// Non-owning view of a team configuration: robots() projections of kRobotDim.
class TeamView {
 public:
  TeamView(Coords flat, std::size_t robots);

  [[nodiscard]] std::size_t robots() const noexcept { return robots_; }
  [[nodiscard]] Coords flat() const noexcept { return flat_; }
  [[nodiscard]] Coords projection(std::size_t i) const {
    return flat_.subspan(i * kRobotDim, kRobotDim);
  }

 private:
  Coords flat_;
  std::size_t robots_;
};

enum class Strategy { None, Basic, Partial, Shared };

inline constexpr Strategy kAllStrategies[] = {Strategy::None, Strategy::Basic, Strategy::Partial,
                                              Strategy::Shared};

[[nodiscard]] std::string_view to_string(Strategy s) noexcept;
/// Throws ContractViolation for unknown names.
[[nodiscard]] Strategy parse_strategy(std::string_view name);

struct CertOutcome {
  bool free = false;
  /// Bit i set when robot i received a standard clearance call.
  std::uint32_t checked_mask = 0;
  std::size_t robots = 0;

  [[nodiscard]] std::size_t checked_count() const noexcept;
  [[nodiscard]] double check_fraction() const noexcept {
    return robots == 0 ? 0.0 : static_cast<double>(checked_count()) / static_cast<double>(robots);
  }
  [[nodiscard]] bool checked(std::size_t robot) const noexcept {
    return ((checked_mask >> robot) & 1U) != 0;
  }
};

/// Strict ball membership: dist(center, q) < radius.
[[nodiscard]] bool certify_ball(Coords center, double radius, Coords q);

/// Standard check of every robot, no certificates involved.
[[nodiscard]] CertOutcome check_none(TeamView q, StandardChecker& checker);

inline constexpr std::size_t kNoCutoff = std::numeric_limits<std::size_t>::max();

/// True when a certificate store of this size should fall back to standard checks.
[[nodiscard]] constexpr bool cutoff_guard(std::size_t store_size, std::size_t threshold) noexcept {
  return threshold != kNoCutoff && store_size > threshold;
}

using NodeId = std::uint32_t;

/// Strategy state owned by one planner run. Node ids are the planner's node
/// indices and must be committed in increasing order starting at 0.
class CertificateStrategy {
 public:
  CertificateStrategy(StandardChecker& checker, std::size_t robots, std::size_t cutoff);
  virtual ~CertificateStrategy() = default;
  CertificateStrategy(const CertificateStrategy&) = delete;
  CertificateStrategy& operator=(const CertificateStrategy&) = delete;

  [[nodiscard]] virtual Strategy kind() const noexcept = 0;

  /// Decides whether q is free. `nearest` is the planner node closest to q,
  /// empty only for the root.
  CertOutcome check(TeamView q, std::optional<NodeId> nearest);

  /// Records the certificates of the configuration passed to the last check()
  /// (which must have been free) under planner node `node`.
  void commit(NodeId node);

  /// Size of the store the cutoff guard watches.
  [[nodiscard]] virtual std::size_t store_size() const noexcept = 0;

  [[nodiscard]] std::size_t robots() const noexcept { return robots_; }
  [[nodiscard]] std::size_t cutoff() const noexcept { return cutoff_; }
  [[nodiscard]] std::size_t committed() const noexcept { return committed_; }

 protected:
  virtual CertOutcome check_impl(TeamView q, std::optional<NodeId> nearest) = 0;
  /// Called by commit(); `fallback` is set when the last check bypassed certificates.
  virtual void commit_impl(NodeId node, bool fallback) = 0;

  /// Standard checks for every robot in `mask`, writing clearances into radii.
  bool check_robots(TeamView q, std::uint32_t mask, std::vector<double>& radii);

  StandardChecker& checker_;
  std::size_t robots_;

 private:
  std::size_t cutoff_;
  std::size_t committed_ = 0;
  bool pending_ = false;
  bool pending_fallback_ = false;
};

class NoCertificates final : public CertificateStrategy {
 public:
  NoCertificates(StandardChecker& checker, std::size_t robots)
      : CertificateStrategy(checker, robots, kNoCutoff) {}
  [[nodiscard]] Strategy kind() const noexcept override { return Strategy::None; }
  [[nodiscard]] std::size_t store_size() const noexcept override { return 0; }

 protected:
  CertOutcome check_impl(TeamView q, std::optional<NodeId> nearest) override;
  void commit_impl(NodeId, bool) override {}
};

/// Per-robot clearance balls shared by the basic and partial strategies.
class BallStore {
 public:
  std::uint32_t add(Coords center, double radius);
  [[nodiscard]] Coords center(std::uint32_t ball) const {
    return Coords(centers_).subspan(ball * kRobotDim, kRobotDim);
  }
  [[nodiscard]] double radius(std::uint32_t ball) const { return radii_[ball]; }
  [[nodiscard]] bool covers(std::uint32_t ball, Coords q) const {
    return certify_ball(center(ball), radius(ball), q);
  }
  [[nodiscard]] std::size_t size() const noexcept { return radii_.size(); }

 private:
  std::vector<double> centers_;
  std::vector<double> radii_;
};

class BasicCertificates final : public CertificateStrategy {
 public:
  using CertificateStrategy::CertificateStrategy;
  [[nodiscard]] Strategy kind() const noexcept override { return Strategy::Basic; }
  [[nodiscard]] std::size_t store_size() const noexcept override { return node_cert_.size(); }
  /// First ball of the R-ball certificate node n points to, if any.
  [[nodiscard]] std::optional<std::uint32_t> certificate_of(NodeId n) const;
  [[nodiscard]] const BallStore& balls() const noexcept { return balls_; }

 protected:
  CertOutcome check_impl(TeamView q, std::optional<NodeId> nearest) override;
  void commit_impl(NodeId node, bool fallback) override;

 private:
  static constexpr std::int64_t kNone = -1;
  BallStore balls_;
  std::vector<std::int64_t> node_cert_;
  std::int64_t pending_cert_ = kNone;
  std::vector<double> pending_q_;
  std::vector<double> pending_radii_;
};

class PartialCertificates final : public CertificateStrategy {
 public:
  using CertificateStrategy::CertificateStrategy;
  [[nodiscard]] Strategy kind() const noexcept override { return Strategy::Partial; }
  [[nodiscard]] std::size_t store_size() const noexcept override {
    return robots_ == 0 ? 0 : node_refs_.size() / robots_;
  }
  /// Ball certifying robot `robot` of node n, if any.
  [[nodiscard]] std::optional<std::uint32_t> reference(NodeId n, std::size_t robot) const;
  [[nodiscard]] const BallStore& balls() const noexcept { return balls_; }

 protected:
  CertOutcome check_impl(TeamView q, std::optional<NodeId> nearest) override;
  void commit_impl(NodeId node, bool fallback) override;

 private:
  static constexpr std::int64_t kNone = -1;
  BallStore balls_;
  std::vector<std::int64_t> node_refs_;
  std::vector<std::int64_t> pending_refs_;
  std::vector<double> pending_q_;
  std::vector<double> pending_radii_;
};

class SharedProjection final : public CertificateStrategy {
 public:
  SharedProjection(StandardChecker& checker, std::size_t robots, std::size_t cutoff);
  [[nodiscard]] Strategy kind() const noexcept override { return Strategy::Shared; }
  [[nodiscard]] std::size_t store_size() const noexcept override { return tree_.size(); }

  [[nodiscard]] const KdTree& tree() const noexcept { return tree_; }
  /// Shared-tree entry holding robot `robot`'s projection of node n.
  [[nodiscard]] std::optional<EntryHandle> handle(NodeId n, std::size_t robot) const;
  /// Entry that certified each robot in the last check (empty when checked).
  [[nodiscard]] const std::vector<std::optional<EntryHandle>>& last_certifiers() const noexcept {
    return certifiers_;
  }
  [[nodiscard]] const QueryStats& search_stats() const noexcept { return stats_; }

 protected:
  CertOutcome check_impl(TeamView q, std::optional<NodeId> nearest) override;
  void commit_impl(NodeId node, bool fallback) override;

 private:
  static constexpr std::uint32_t kNoHandle = std::numeric_limits<std::uint32_t>::max();
  KdTree tree_;
  std::vector<std::uint32_t> node_handles_;
  std::vector<std::optional<EntryHandle>> certifiers_;
  std::vector<double> pending_q_;
  std::vector<double> pending_radii_;
  QueryStats stats_;
};

[[nodiscard]] std::unique_ptr<CertificateStrategy> make_strategy(Strategy s,
                                                                 StandardChecker& checker,
                                                                 std::size_t robots,
                                                                 std::size_t cutoff = kNoCutoff);

}  // namespace mrcert
