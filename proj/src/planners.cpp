#include "mrcert/planners.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "mrcert/errors.hpp"

namespace mrcert {

std::string_view to_string(PlannerKind p) noexcept {
  return p == PlannerKind::Rrt ? "rrt" : "rrtstar";
}

PlannerKind parse_planner(std::string_view name) {
  if (name == "rrt") return PlannerKind::Rrt;
  if (name == "rrtstar") return PlannerKind::RrtStar;
  throw ContractViolation("unknown planner '" + std::string(name) + "'");
}

PlannerParams PlannerParams::defaults(const Workspace& w, std::size_t robots,
                                      std::size_t iterations, std::uint64_t seed) {
  const double ex = w.bounds().hi()[0] - w.bounds().lo()[0];
  const double ey = w.bounds().hi()[1] - w.bounds().lo()[1];
  const auto r = static_cast<double>(robots);
  const double d = r * static_cast<double>(kRobotDim);
  PlannerParams p;
  p.step_size = 0.05 * std::sqrt(r * (ex * ex + ey * ey));
  p.goal_bias = 0.05;
  p.iterations = iterations;
  p.rng_seed = seed;
  p.edge_resolution = p.step_size / 10.0;
  p.rrtstar_gamma = 2.0 * std::pow(1.0 + 1.0 / d, 1.0 / d) * std::pow(ex * ey, r / d);
  return p;
}

std::vector<double> composite_start(const Workspace& w, std::size_t robots) {
  if (robots == 0 || robots > w.max_robots()) {
    throw ContractViolation("team size " + std::to_string(robots) + " not supported by workspace");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < robots; ++i) {
    out.insert(out.end(), w.starts()[i].coords().begin(), w.starts()[i].coords().end());
  }
  return out;
}

std::vector<double> composite_goal(const Workspace& w, std::size_t robots) {
  if (robots == 0 || robots > w.max_robots()) {
    throw ContractViolation("team size " + std::to_string(robots) + " not supported by workspace");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < robots; ++i) {
    out.insert(out.end(), w.goals()[i].coords().begin(), w.goals()[i].coords().end());
  }
  return out;
}

std::vector<double> sample(const Workspace& w, std::size_t robots, const PlannerParams& params,
                           Rng& rng) {
  if (uniform01(rng) < params.goal_bias) return composite_goal(w, robots);
  std::vector<double> out(robots * kRobotDim);
  for (std::size_t i = 0; i < robots; ++i) {
    for (std::size_t k = 0; k < kRobotDim; ++k) {
      out[i * kRobotDim + k] = uniform(rng, w.bounds().lo()[k], w.bounds().hi()[k]);
    }
  }
  return out;
}

std::vector<double> steer(Coords from, Coords toward, double eps) {
  const double d = dist(from, toward);
  if (d <= eps) return {toward.begin(), toward.end()};
  const double t = eps / d;
  std::vector<double> out(from.size());
  for (std::size_t k = 0; k < from.size(); ++k) out[k] = from[k] + t * (toward[k] - from[k]);
  return out;
}

Planner::Planner(PlannerKind kind, const Workspace& w, std::size_t robots, PlannerParams params,
                 Strategy strategy, std::size_t cutoff)
    : kind_(kind),
      w_(&w),
      robots_(robots),
      params_(params),
      rng_(params.rng_seed),
      checker_(w),
      strategy_(make_strategy(strategy, checker_, robots, cutoff)),
      tree_(robots * kRobotDim),
      goal_(composite_goal(w, robots)) {
  if (!(params.step_size > 0.0) || !(params.goal_bias >= 0.0 && params.goal_bias <= 1.0) ||
      !(params.rrtstar_gamma > 0.0)) {
    throw ContractViolation("Planner: invalid parameters");
  }
  candidate_ = composite_start(w, robots);
  const CertOutcome root = strategy_->check(TeamView(candidate_, robots_), std::nullopt);
  if (!root.free) throw ContractViolation("Planner: start configuration is not free");
  add_node(candidate_, kNoParent, 0.0);
  strategy_->commit(0);
}

TeamView Planner::config(NodeId n) const {
  if (n >= node_count()) throw ContractViolation("Planner::config: unknown node");
  return TeamView(node_coords(n), robots_);
}

bool Planner::edge_free(Coords a, Coords b) {
  for (std::size_t i = 0; i < robots_; ++i) {
    if (!checker_.segment_free(a.subspan(i * kRobotDim, kRobotDim),
                               b.subspan(i * kRobotDim, kRobotDim))) {
      return false;
    }
  }
  return true;
}

NodeId Planner::add_node(Coords q, std::int64_t parent, double cost) {
  const auto id = static_cast<NodeId>(node_count());
  configs_.insert(configs_.end(), q.begin(), q.end());
  parent_.push_back(parent);
  cost_.push_back(cost);
  children_.emplace_back();
  if (parent != kNoParent) children_[static_cast<std::size_t>(parent)].push_back(id);
  tree_.insert(q, 0.0, id);
  return id;
}

double Planner::near_radius() const {
  const auto n = static_cast<double>(node_count());
  const auto d = static_cast<double>(dim());
  return std::min(params_.step_size, params_.rrtstar_gamma * std::pow(std::log(n) / n, 1.0 / d));
}

IterationEvent Planner::step() {
  IterationEvent ev;
  ev.iteration = ++iteration_;
  const std::vector<double> x = sample(*w_, robots_, params_, rng_);
  const NodeId nearest = tree_.nearest(x).handle.index;
  candidate_ = steer(node_coords(nearest), x, params_.step_size);
  const Coords q(candidate_);
  ev.outcome = strategy_->check(TeamView(q, robots_), nearest);
  if (!ev.outcome.free) return ev;

  if (kind_ == PlannerKind::Rrt) {
    if (!edge_free(node_coords(nearest), q)) return ev;
    ev.node = add_node(q, nearest, cost_[nearest] + dist(node_coords(nearest), q));
  } else {
    std::vector<EntryHandle> near = tree_.near(q, near_radius());
    struct Candidate {
      double cost;
      NodeId id;
    };
    std::vector<Candidate> candidates;
    bool has_nearest = false;
    for (EntryHandle h : near) {
      candidates.push_back({cost_[h.index] + dist(node_coords(h.index), q), h.index});
      has_nearest = has_nearest || h.index == nearest;
    }
    if (!has_nearest) candidates.push_back({cost_[nearest] + dist(node_coords(nearest), q), nearest});
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      return a.cost < b.cost || (a.cost == b.cost && a.id < b.id);
    });
    const auto parent = std::find_if(candidates.begin(), candidates.end(), [&](const Candidate& c) {
      return edge_free(node_coords(c.id), q);
    });
    if (parent == candidates.end()) return ev;
    ev.node = add_node(q, parent->id, parent->cost);
    rewire(*ev.node, near, parent->id);
  }
  strategy_->commit(*ev.node);
  ev.accepted = true;
  return ev;
}

void Planner::rewire(NodeId from, std::span<const EntryHandle> near, NodeId skip) {
  const Coords from_q = node_coords(from);
  std::vector<NodeId> stack;
  for (EntryHandle h : near) {
    const NodeId x = h.index;
    if (x == skip) continue;
    const double through = cost_[from] + dist(from_q, node_coords(x));
    if (!(through < cost_[x]) || is_ancestor(x, from) || !edge_free(from_q, node_coords(x))) {
      continue;
    }
    auto& siblings = children_[static_cast<std::size_t>(parent_[x])];
    siblings.erase(std::find(siblings.begin(), siblings.end(), x));
    parent_[x] = from;
    children_[from].push_back(x);
    cost_[x] = through;
    stack.assign(children_[x].begin(), children_[x].end());
    while (!stack.empty()) {
      const NodeId c = stack.back();
      stack.pop_back();
      const auto p = static_cast<NodeId>(parent_[c]);
      cost_[c] = cost_[p] + dist(node_coords(p), node_coords(c));
      stack.insert(stack.end(), children_[c].begin(), children_[c].end());
    }
  }
}

bool Planner::is_ancestor(NodeId a, NodeId n) const {
  for (std::int64_t p = parent_[n]; p != kNoParent; p = parent_[static_cast<std::size_t>(p)]) {
    if (p == a) return true;
  }
  return false;
}

std::optional<double> Planner::best_goal_cost(double tolerance) const {
  std::optional<double> best;
  for (NodeId n = 0; n < node_count(); ++n) {
    if (dist(node_coords(n), goal_) <= tolerance && (!best || cost_[n] < *best)) best = cost_[n];
  }
  return best;
}

RunResult run(PlannerKind kind, const Workspace& w, std::size_t robots, const PlannerParams& params,
              Strategy strategy, std::size_t cutoff, const IterationHook& hook) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  RunResult out;
  out.planner = std::make_unique<Planner>(kind, w, robots, params, strategy, cutoff);
  out.records.reserve(params.iterations);
  double cum = 0.0;
  // Time spent in the hook is excluded from t_total.
  Clock::duration hook_time{};
  for (std::size_t i = 0; i < params.iterations; ++i) {
    const IterationEvent ev = out.planner->step();
    const double f = ev.outcome.check_fraction();
    cum += f;
    const auto now = Clock::now();
    out.records.push_back({ev.iteration, f, cum, out.planner->node_count(), ev.accepted,
                           std::chrono::duration<double>(now - t0 - hook_time).count(),
                           out.planner->checker().seconds()});
    if (hook) {
      hook(*out.planner, ev);
      hook_time += Clock::now() - now;
    }
  }
  return out;
}

}  // namespace mrcert
