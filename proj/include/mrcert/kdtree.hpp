#pragma once
// Incremental kd-tree over k-dimensional points.
//
// Axes cycle with depth and every inserted point becomes the splitting node
// of its cell; there is no rebalancing and no deletion. Each node also keeps
// the bounding box of its subtree and the largest ball radius stored in it,
// which lets certificate searches skip subtrees that cannot hold a ball
// covering the query.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "mrcert/errors.hpp"
#include "mrcert/geometry.hpp"

namespace mrcert {

/// Stable identifier of one stored entry: its insertion index.
struct EntryHandle {
  std::uint32_t index = 0;
  friend auto operator<=>(const EntryHandle&, const EntryHandle&) = default;
};

struct QueryStats {
  /// Entries whose point was examined.
  std::size_t visited = 0;
};

class KdTree {
 public:
  explicit KdTree(std::size_t dim);

  /// Appends (p, radius, payload). radius is the entry's certificate ball;
  /// use 0 for entries that never certify.
  EntryHandle insert(Coords p, double radius = 0.0, std::size_t payload = 0);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t size() const noexcept { return radius_.size(); }
  [[nodiscard]] bool empty() const noexcept { return radius_.empty(); }

  [[nodiscard]] Coords point(EntryHandle h) const;
  [[nodiscard]] double radius(EntryHandle h) const;
  [[nodiscard]] std::size_t payload(EntryHandle h) const;
  [[nodiscard]] bool valid(EntryHandle h) const noexcept { return h.index < size(); }

  struct Nearest {
    EntryHandle handle;
    double distance;
  };

  /// Closest entry; ties go to the earliest insertion. Throws EmptyTreeError.
  [[nodiscard]] Nearest nearest(Coords q, QueryStats* stats = nullptr) const;

  /// Every entry with dist <= radius, in insertion order.
  [[nodiscard]] std::vector<EntryHandle> near(Coords q, double radius) const;

  /// True iff q lies strictly inside the ball stored at h.
  [[nodiscard]] bool ball_covers(EntryHandle h, Coords q) const {
    return dist(point(h), q) < radius_[h.index];
  }

  /// Finds an entry accepted by `accept`, walking up from `seed` toward the
  /// root and descending only into subtrees whose bounding box lies closer to
  /// q than the largest ball radius they contain. `accept(h)` must imply
  /// ball_covers(h, q); subject to that, the walk is complete: it returns an
  /// entry whenever any accepted entry exists. The first accepted entry found
  /// is returned, not necessarily the nearest one.
  template <class Accept>
  [[nodiscard]] std::optional<EntryHandle> seeded_first_cert(Coords q, EntryHandle seed,
                                                             Accept&& accept,
                                                             QueryStats* stats = nullptr) const;

  /// The same search started at the root.
  template <class Accept>
  [[nodiscard]] std::optional<EntryHandle> first_cert(Coords q, Accept&& accept,
                                                      QueryStats* stats = nullptr) const;

 private:
  static constexpr std::int32_t kNone = -1;

  void require_dim(Coords q, const char* what) const;
  [[nodiscard]] double box_dist_sq(std::size_t node, Coords q) const;
  [[nodiscard]] bool may_cover(std::int32_t node, Coords q) const {
    return node != kNone && std::sqrt(box_dist_sq(static_cast<std::size_t>(node), q)) <
                                max_radius_[static_cast<std::size_t>(node)];
  }
  /// Depth-first certificate search inside one subtree, nearer child first.
  template <class Accept>
  std::optional<EntryHandle> search_subtree(std::int32_t root, Coords q, Accept& accept,
                                            std::size_t& visited,
                                            std::vector<std::int32_t>& stack) const;
  [[nodiscard]] std::pair<std::int32_t, std::int32_t> near_far(std::size_t node,
                                                               Coords q) const;

  std::size_t dim_;
  std::vector<double> coords_;
  std::vector<double> box_lo_;
  std::vector<double> box_hi_;
  std::vector<double> radius_;
  std::vector<double> max_radius_;
  std::vector<std::size_t> payload_;
  std::vector<std::int32_t> left_;
  std::vector<std::int32_t> right_;
  std::vector<std::int32_t> parent_;
  std::vector<std::uint32_t> axis_;
};

template <class Accept>
std::optional<EntryHandle> KdTree::search_subtree(std::int32_t root, Coords q, Accept& accept,
                                                  std::size_t& visited,
                                                  std::vector<std::int32_t>& stack) const {
  stack.clear();
  if (may_cover(root, q)) stack.push_back(root);
  while (!stack.empty()) {
    const auto node = static_cast<std::size_t>(stack.back());
    stack.pop_back();
    ++visited;
    const EntryHandle h{static_cast<std::uint32_t>(node)};
    if (accept(h)) return h;
    const auto [first, second] = near_far(node, q);
    if (may_cover(second, q)) stack.push_back(second);
    if (may_cover(first, q)) stack.push_back(first);
  }
  return std::nullopt;
}

template <class Accept>
std::optional<EntryHandle> KdTree::seeded_first_cert(Coords q, EntryHandle seed, Accept&& accept,
                                                     QueryStats* stats) const {
  if (!valid(seed)) throw ContractViolation("seeded_first_cert: invalid seed handle");
  require_dim(q, "seeded_first_cert");
  std::size_t visited = 1;
  std::optional<EntryHandle> found;
  if (accept(seed)) {
    found = seed;
  } else {
    std::vector<std::int32_t> stack;
    const auto s = static_cast<std::int32_t>(seed.index);
    for (std::int32_t child : {left_[seed.index], right_[seed.index]}) {
      if (!found) found = search_subtree(child, q, accept, visited, stack);
    }
    // Climb: at each ancestor, the part of its subtree not yet searched is the
    // ancestor itself plus the sibling subtree of the branch just left.
    std::int32_t from = s;
    std::int32_t cur = parent_[seed.index];
    while (!found && cur != kNone) {
      const auto c = static_cast<std::size_t>(cur);
      if (may_cover(cur, q)) {
        ++visited;
        const EntryHandle h{static_cast<std::uint32_t>(c)};
        if (accept(h)) {
          found = h;
          break;
        }
        const std::int32_t sibling = left_[c] == from ? right_[c] : left_[c];
        found = search_subtree(sibling, q, accept, visited, stack);
      }
      from = cur;
      cur = parent_[c];
    }
  }
  if (stats != nullptr) stats->visited += visited;
  return found;
}

template <class Accept>
std::optional<EntryHandle> KdTree::first_cert(Coords q, Accept&& accept, QueryStats* stats) const {
  require_dim(q, "first_cert");
  std::size_t visited = 0;
  std::vector<std::int32_t> stack;
  auto found = empty() ? std::nullopt : search_subtree(0, q, accept, visited, stack);
  if (stats != nullptr) stats->visited += visited;
  return found;
}

}  // namespace mrcert
