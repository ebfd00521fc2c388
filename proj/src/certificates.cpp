#include "mrcert/certificates.hpp"

#include <bit>
#include <string>

#include "mrcert/errors.hpp"

namespace mrcert {

TeamView::TeamView(Coords flat, std::size_t robots) : flat_(flat), robots_(robots) {
  if (flat.size() != robots * kRobotDim) {
    throw ContractViolation("TeamView: expected " + std::to_string(robots * kRobotDim) +
                            " coordinates, got " + std::to_string(flat.size()));
  }
}

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::None:
      return "none";
    case Strategy::Basic:
      return "basic";
    case Strategy::Partial:
      return "partial";
    case Strategy::Shared:
      return "shared";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  for (Strategy s : kAllStrategies) {
    if (to_string(s) == name) return s;
  }
  throw ContractViolation("unknown strategy '" + std::string(name) + "'");
}

std::size_t CertOutcome::checked_count() const noexcept {
  return static_cast<std::size_t>(std::popcount(checked_mask));
}

bool certify_ball(Coords center, double radius, Coords q) { return dist(center, q) < radius; }

CertOutcome check_none(TeamView q, StandardChecker& checker) {
  CertOutcome out{true, 0, q.robots()};
  for (std::size_t i = 0; i < q.robots(); ++i) {
    out.checked_mask |= 1U << i;
    if (!(checker.clearance(q.projection(i)) > 0.0)) out.free = false;
  }
  return out;
}

// ---------------------------------------------------------------------------

CertificateStrategy::CertificateStrategy(StandardChecker& checker, std::size_t robots,
                                         std::size_t cutoff)
    : checker_(checker), robots_(robots), cutoff_(cutoff) {
  if (robots == 0 || robots > 32) throw ContractViolation("strategy: robots must be in [1, 32]");
}

CertOutcome CertificateStrategy::check(TeamView q, std::optional<NodeId> nearest) {
  if (q.robots() != robots_) throw ContractViolation("check: team size mismatch");
  if (nearest && *nearest >= committed_) throw ContractViolation("check: unknown nearest node");
  pending_fallback_ = cutoff_guard(store_size(), cutoff_);
  const CertOutcome out = pending_fallback_ ? check_none(q, checker_) : check_impl(q, nearest);
  pending_ = out.free;
  return out;
}

void CertificateStrategy::commit(NodeId node) {
  if (!pending_) throw ContractViolation("commit: last check did not report a free configuration");
  if (node != committed_) throw ContractViolation("commit: nodes must be committed in order");
  commit_impl(node, pending_fallback_);
  pending_ = false;
  ++committed_;
}

bool CertificateStrategy::check_robots(TeamView q, std::uint32_t mask, std::vector<double>& radii) {
  radii.assign(robots_, 0.0);
  bool free = true;
  for (std::size_t i = 0; i < robots_; ++i) {
    if (((mask >> i) & 1U) == 0) continue;
    radii[i] = checker_.clearance(q.projection(i));
    if (!(radii[i] > 0.0)) free = false;
  }
  return free;
}

CertOutcome NoCertificates::check_impl(TeamView q, std::optional<NodeId>) {
  return check_none(q, checker_);
}

std::uint32_t BallStore::add(Coords center, double radius) {
  centers_.insert(centers_.end(), center.begin(), center.end());
  radii_.push_back(radius);
  return static_cast<std::uint32_t>(radii_.size() - 1);
}

// ---------------------------------------------------------------------------

std::optional<std::uint32_t> BasicCertificates::certificate_of(NodeId n) const {
  if (n >= node_cert_.size() || node_cert_[n] == kNone) return std::nullopt;
  return static_cast<std::uint32_t>(node_cert_[n]);
}

CertOutcome BasicCertificates::check_impl(TeamView q, std::optional<NodeId> nearest) {
  pending_q_.assign(q.flat().begin(), q.flat().end());
  pending_cert_ = kNone;
  if (nearest && node_cert_[*nearest] != kNone) {
    const auto first = static_cast<std::uint32_t>(node_cert_[*nearest]);
    bool all_inside = true;
    for (std::size_t i = 0; i < robots_ && all_inside; ++i) {
      all_inside = balls_.covers(first + static_cast<std::uint32_t>(i), q.projection(i));
    }
    if (all_inside) {
      pending_cert_ = node_cert_[*nearest];
      return {true, 0, robots_};
    }
  }
  const std::uint32_t all = robots_ == 32 ? ~0U : (1U << robots_) - 1U;
  return {check_robots(q, all, pending_radii_), all, robots_};
}

void BasicCertificates::commit_impl(NodeId, bool fallback) {
  if (fallback) {
    node_cert_.push_back(kNone);
    return;
  }
  if (pending_cert_ == kNone) {
    const TeamView q(pending_q_, robots_);
    pending_cert_ = balls_.add(q.projection(0), pending_radii_[0]);
    for (std::size_t i = 1; i < robots_; ++i) balls_.add(q.projection(i), pending_radii_[i]);
  }
  node_cert_.push_back(pending_cert_);
}

// ---------------------------------------------------------------------------

std::optional<std::uint32_t> PartialCertificates::reference(NodeId n, std::size_t robot) const {
  const std::size_t slot = static_cast<std::size_t>(n) * robots_ + robot;
  if (robot >= robots_ || slot >= node_refs_.size() || node_refs_[slot] == kNone) {
    return std::nullopt;
  }
  return static_cast<std::uint32_t>(node_refs_[slot]);
}

CertOutcome PartialCertificates::check_impl(TeamView q, std::optional<NodeId> nearest) {
  pending_q_.assign(q.flat().begin(), q.flat().end());
  pending_refs_.assign(robots_, kNone);
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < robots_; ++i) {
    const std::int64_t ref =
        nearest ? node_refs_[static_cast<std::size_t>(*nearest) * robots_ + i] : kNone;
    if (ref != kNone && balls_.covers(static_cast<std::uint32_t>(ref), q.projection(i))) {
      pending_refs_[i] = ref;
    } else {
      mask |= 1U << i;
    }
  }
  return {check_robots(q, mask, pending_radii_), mask, robots_};
}

void PartialCertificates::commit_impl(NodeId, bool fallback) {
  if (fallback) {
    node_refs_.insert(node_refs_.end(), robots_, kNone);
    return;
  }
  const TeamView q(pending_q_, robots_);
  for (std::size_t i = 0; i < robots_; ++i) {
    if (pending_refs_[i] != kNone) {
      node_refs_.push_back(pending_refs_[i]);
    } else {
      node_refs_.push_back(balls_.add(q.projection(i), pending_radii_[i]));
    }
  }
}

// ---------------------------------------------------------------------------

SharedProjection::SharedProjection(StandardChecker& checker, std::size_t robots,
                                   std::size_t cutoff)
    : CertificateStrategy(checker, robots, cutoff), tree_(kRobotDim) {}

std::optional<EntryHandle> SharedProjection::handle(NodeId n, std::size_t robot) const {
  const std::size_t slot = static_cast<std::size_t>(n) * robots_ + robot;
  if (robot >= robots_ || slot >= node_handles_.size() || node_handles_[slot] == kNoHandle) {
    return std::nullopt;
  }
  return EntryHandle{node_handles_[slot]};
}

CertOutcome SharedProjection::check_impl(TeamView q, std::optional<NodeId> nearest) {
  pending_q_.assign(q.flat().begin(), q.flat().end());
  certifiers_.assign(robots_, std::nullopt);
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < robots_; ++i) {
    const Coords qi = q.projection(i);
    auto accept = [&](EntryHandle h) { return tree_.ball_covers(h, qi); };
    std::optional<EntryHandle> found;
    if (!tree_.empty()) {
      const auto seed = nearest ? handle(*nearest, i) : std::nullopt;
      found = seed ? tree_.seeded_first_cert(qi, *seed, accept, &stats_)
                   : tree_.first_cert(qi, accept, &stats_);
    }
    if (found) {
      certifiers_[i] = found;
    } else {
      mask |= 1U << i;
    }
  }
  return {check_robots(q, mask, pending_radii_), mask, robots_};
}

void SharedProjection::commit_impl(NodeId node, bool fallback) {
  if (fallback) {
    node_handles_.insert(node_handles_.end(), robots_, kNoHandle);
    return;
  }
  const TeamView q(pending_q_, robots_);
  for (std::size_t i = 0; i < robots_; ++i) {
    // Certified projections are stored as zero-radius entries: they seed later
    // searches but never certify anything themselves.
    const double radius = certifiers_[i] ? 0.0 : pending_radii_[i];
    node_handles_.push_back(tree_.insert(q.projection(i), radius, node).index);
  }
}

// ---------------------------------------------------------------------------

std::unique_ptr<CertificateStrategy> make_strategy(Strategy s, StandardChecker& checker,
                                                   std::size_t robots, std::size_t cutoff) {
  switch (s) {
    case Strategy::None:
      return std::make_unique<NoCertificates>(checker, robots);
    case Strategy::Basic:
      return std::make_unique<BasicCertificates>(checker, robots, cutoff);
    case Strategy::Partial:
      return std::make_unique<PartialCertificates>(checker, robots, cutoff);
    case Strategy::Shared:
      return std::make_unique<SharedProjection>(checker, robots, cutoff);
  }
  throw ContractViolation("make_strategy: unknown strategy");
}

}  // namespace mrcert
