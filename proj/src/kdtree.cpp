#include "mrcert/kdtree.hpp"

#include <algorithm>
#include <string>

namespace mrcert {

KdTree::KdTree(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ContractViolation("KdTree: dimension must be positive");
}

void KdTree::require_dim(Coords q, const char* what) const {
  if (q.size() != dim_) {
    throw ContractViolation(std::string(what) + ": expected " + std::to_string(dim_) +
                            "-D point, got " + std::to_string(q.size()) + "-D");
  }
}

EntryHandle KdTree::insert(Coords p, double radius, std::size_t payload) {
  require_dim(p, "KdTree::insert");
  if (!(radius >= 0.0)) throw ContractViolation("KdTree::insert: negative radius");
  if (size() >= static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    throw ContractViolation("KdTree::insert: capacity exhausted");
  }
  const auto idx = static_cast<std::int32_t>(size());
  std::int32_t parent = kNone;
  std::uint32_t depth = 0;
  if (idx > 0) {
    std::int32_t cur = 0;
    while (true) {
      const auto c = static_cast<std::size_t>(cur);
      for (std::size_t k = 0; k < dim_; ++k) {
        box_lo_[c * dim_ + k] = std::min(box_lo_[c * dim_ + k], p[k]);
        box_hi_[c * dim_ + k] = std::max(box_hi_[c * dim_ + k], p[k]);
      }
      max_radius_[c] = std::max(max_radius_[c], radius);
      const std::uint32_t axis = axis_[c];
      std::int32_t& child = p[axis] < coords_[c * dim_ + axis] ? left_[c] : right_[c];
      ++depth;
      if (child == kNone) {
        child = idx;
        parent = cur;
        break;
      }
      cur = child;
    }
  }
  coords_.insert(coords_.end(), p.begin(), p.end());
  box_lo_.insert(box_lo_.end(), p.begin(), p.end());
  box_hi_.insert(box_hi_.end(), p.begin(), p.end());
  radius_.push_back(radius);
  max_radius_.push_back(radius);
  payload_.push_back(payload);
  left_.push_back(kNone);
  right_.push_back(kNone);
  parent_.push_back(parent);
  axis_.push_back(static_cast<std::uint32_t>(depth % dim_));
  return EntryHandle{static_cast<std::uint32_t>(idx)};
}

Coords KdTree::point(EntryHandle h) const {
  if (!valid(h)) throw ContractViolation("KdTree::point: invalid handle");
  return Coords(coords_).subspan(h.index * dim_, dim_);
}

double KdTree::radius(EntryHandle h) const {
  if (!valid(h)) throw ContractViolation("KdTree::radius: invalid handle");
  return radius_[h.index];
}

std::size_t KdTree::payload(EntryHandle h) const {
  if (!valid(h)) throw ContractViolation("KdTree::payload: invalid handle");
  return payload_[h.index];
}

double KdTree::box_dist_sq(std::size_t node, Coords q) const {
  // Same per-axis operation order as dist_sq, so for every point p in the box
  // the rounded result never exceeds the rounded dist_sq(p, q).
  double s = 0.0;
  const double* lo = &box_lo_[node * dim_];
  const double* hi = &box_hi_[node * dim_];
  for (std::size_t k = 0; k < dim_; ++k) {
    const double gap = std::max(std::max(lo[k] - q[k], q[k] - hi[k]), 0.0);
    s += gap * gap;
  }
  return s;
}

std::pair<std::int32_t, std::int32_t> KdTree::near_far(std::size_t node, Coords q) const {
  const std::uint32_t axis = axis_[node];
  if (q[axis] < coords_[node * dim_ + axis]) return {left_[node], right_[node]};
  return {right_[node], left_[node]};
}

KdTree::Nearest KdTree::nearest(Coords q, QueryStats* stats) const {
  require_dim(q, "KdTree::nearest");
  if (empty()) throw EmptyTreeError("KdTree::nearest: empty tree");
  double best_d2 = std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  std::size_t visited = 0;
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const auto node = static_cast<std::size_t>(stack.back());
    stack.pop_back();
    // Strict comparison: equal-distance boxes may hold an earlier insertion.
    if (box_dist_sq(node, q) > best_d2) continue;
    ++visited;
    const double d2 = dist_sq(Coords(coords_).subspan(node * dim_, dim_), q);
    if (d2 < best_d2 || (d2 == best_d2 && node < best)) {
      best_d2 = d2;
      best = node;
    }
    const auto [first, second] = near_far(node, q);
    if (second != kNone) stack.push_back(second);
    if (first != kNone) stack.push_back(first);
  }
  if (stats != nullptr) stats->visited += visited;
  return {EntryHandle{static_cast<std::uint32_t>(best)}, std::sqrt(best_d2)};
}

std::vector<EntryHandle> KdTree::near(Coords q, double radius) const {
  require_dim(q, "KdTree::near");
  if (!(radius >= 0.0)) throw ContractViolation("KdTree::near: negative radius");
  std::vector<EntryHandle> out;
  if (empty()) return out;
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const auto node = static_cast<std::size_t>(stack.back());
    stack.pop_back();
    if (std::sqrt(box_dist_sq(node, q)) > radius) continue;
    if (dist(Coords(coords_).subspan(node * dim_, dim_), q) <= radius) {
      out.push_back(EntryHandle{static_cast<std::uint32_t>(node)});
    }
    if (left_[node] != kNone) stack.push_back(left_[node]);
    if (right_[node] != kNone) stack.push_back(right_[node]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mrcert
