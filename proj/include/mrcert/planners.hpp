#pragma once
// RRT and RRT* over the composite configuration space of an R-robot team
// (R * 2 dimensions), with node validity decided by a certificate strategy.
// Edges are always validated with the standard segment test, robot by robot.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "mrcert/certificates.hpp"
#include "mrcert/collision.hpp"
#include "mrcert/kdtree.hpp"
#include "mrcert/metrics.hpp"
#include "mrcert/random.hpp"
#include "mrcert/workspace.hpp"

namespace mrcert {

enum class PlannerKind { Rrt, RrtStar };

[[nodiscard]] std::string_view to_string(PlannerKind p) noexcept;
[[nodiscard]] PlannerKind parse_planner(std::string_view name);

struct PlannerParams {
  double step_size = 0.0;  ///< epsilon, composite-space units
  double goal_bias = 0.05;
  std::size_t iterations = 0;
  double rrtstar_gamma = 0.0;
  std::uint64_t rng_seed = 0;
  /// Sampling resolution for dense edge oracles in tests; production edge
  /// checks are exact.
  double edge_resolution = 0.0;

  /// epsilon = 0.05 * diagonal of bounds^R, goal bias 0.05, resolution
  /// epsilon / 10, gamma = 2 (1 + 1/d)^(1/d) vol(bounds^R)^(1/d) with d = 2R.
  static PlannerParams defaults(const Workspace& w, std::size_t robots, std::size_t iterations,
                                std::uint64_t seed);
};

/// Uniform over bounds^R, or the composite goal with probability goal_bias.
[[nodiscard]] std::vector<double> sample(const Workspace& w, std::size_t robots,
                                         const PlannerParams& params, Rng& rng);

/// `toward` if within eps of `from`, else the point at distance eps along the line.
[[nodiscard]] std::vector<double> steer(Coords from, Coords toward, double eps);

/// Concatenated start (or goal) positions of robots 0..robots-1.
[[nodiscard]] std::vector<double> composite_start(const Workspace& w, std::size_t robots);
[[nodiscard]] std::vector<double> composite_goal(const Workspace& w, std::size_t robots);

struct IterationEvent {
  std::size_t iteration = 0;
  CertOutcome outcome;
  bool accepted = false;
  std::optional<NodeId> node;
};

class Planner {
 public:
  static constexpr std::int64_t kNoParent = -1;

  Planner(PlannerKind kind, const Workspace& w, std::size_t robots, PlannerParams params,
          Strategy strategy, std::size_t cutoff = kNoCutoff);

  /// One RRT or RRT* iteration.
  IterationEvent step();

  [[nodiscard]] PlannerKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::size_t robots() const noexcept { return robots_; }
  [[nodiscard]] std::size_t dim() const noexcept { return robots_ * kRobotDim; }
  [[nodiscard]] const PlannerParams& params() const noexcept { return params_; }
  [[nodiscard]] std::size_t iterations_done() const noexcept { return iteration_; }

  [[nodiscard]] std::size_t node_count() const noexcept { return parent_.size(); }
  [[nodiscard]] TeamView config(NodeId n) const;
  [[nodiscard]] std::int64_t parent(NodeId n) const { return parent_.at(n); }
  [[nodiscard]] double cost(NodeId n) const { return cost_.at(n); }
  [[nodiscard]] const std::vector<double>& configs() const noexcept { return configs_; }
  [[nodiscard]] const std::vector<std::int64_t>& parents() const noexcept { return parent_; }

  /// Configuration produced by steering in the last iteration.
  [[nodiscard]] TeamView last_candidate() const { return TeamView(candidate_, robots_); }

  /// Lowest cost of a node within `tolerance` of the composite goal.
  [[nodiscard]] std::optional<double> best_goal_cost(double tolerance) const;

  [[nodiscard]] const StandardChecker& checker() const noexcept { return checker_; }
  [[nodiscard]] const CertificateStrategy& strategy() const noexcept { return *strategy_; }

 private:
  [[nodiscard]] Coords node_coords(NodeId n) const {
    return Coords(configs_).subspan(static_cast<std::size_t>(n) * dim(), dim());
  }
  bool edge_free(Coords a, Coords b);
  NodeId add_node(Coords q, std::int64_t parent, double cost);
  void rewire(NodeId from, std::span<const EntryHandle> near, NodeId skip);
  [[nodiscard]] bool is_ancestor(NodeId a, NodeId n) const;
  [[nodiscard]] double near_radius() const;

  PlannerKind kind_;
  const Workspace* w_;
  std::size_t robots_;
  PlannerParams params_;
  Rng rng_;
  StandardChecker checker_;
  std::unique_ptr<CertificateStrategy> strategy_;
  KdTree tree_;
  std::vector<double> configs_;
  std::vector<std::int64_t> parent_;
  std::vector<double> cost_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<double> candidate_;
  std::vector<double> goal_;
  std::size_t iteration_ = 0;
};

struct RunResult {
  std::unique_ptr<Planner> planner;
  std::vector<TrialRecord> records;
};

using IterationHook = std::function<void(const Planner&, const IterationEvent&)>;

/// Runs params.iterations iterations from a fresh planner, recording one
/// TrialRecord per iteration. The clock starts before the root is checked.
[[nodiscard]] RunResult run(PlannerKind kind, const Workspace& w, std::size_t robots,
                            const PlannerParams& params, Strategy strategy,
                            std::size_t cutoff = kNoCutoff, const IterationHook& hook = {});

}  // namespace mrcert
