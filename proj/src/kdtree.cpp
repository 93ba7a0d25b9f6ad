#include "dsl/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsl/error.hpp"

namespace dsl {

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

KdTree::KdTree(const Dataset& ds, std::vector<NodeId> points, std::size_t leaf_size)
    : ds_(&ds), d_(ds.dims()), points_(std::move(points)), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  nodes_.reserve(2 * points_.size() / leaf_size_ + 1);
  if (!points_.empty()) build(0, static_cast<std::uint32_t>(points_.size()));
  coords_.resize(points_.size() * d_);
  for (std::size_t p = 0; p < points_.size(); ++p) {
    const auto row = ds.row(points_[p]);
    std::copy(row.begin(), row.end(), coords_.begin() + static_cast<std::ptrdiff_t>(p * d_));
  }
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto index = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({begin, end});
  if (end - begin <= leaf_size_) return index;

  const std::size_t d = ds_->dims();
  std::uint32_t best_dim = 0;
  double best_spread = -1.0;
  for (std::size_t k = 0; k < d; ++k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::uint32_t p = begin; p < end; ++p) {
      const double v = ds_->row(points_[p])[k];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_dim = static_cast<std::uint32_t>(k);
    }
  }
  if (best_spread <= 0.0) return index;  // all points coincide

  const std::uint32_t mid = begin + (end - begin) / 2;
  auto first = points_.begin() + begin;
  std::nth_element(first, points_.begin() + mid, points_.begin() + end, [&](NodeId a, NodeId b) {
    return ds_->row(a)[best_dim] < ds_->row(b)[best_dim];
  });
  const double split = ds_->row(points_[mid])[best_dim];

  nodes_[index].dim = best_dim;
  nodes_[index].split = split;
  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

void KdTree::search(std::int32_t node_index, std::span<const double> q, NodeId query,
                    NodeId& best_id, double& best_dist) const {
  const Node& node = nodes_[node_index];
  if (node.left < 0) {
    for (std::uint32_t p = node.begin; p < node.end; ++p) {
      const NodeId id = points_[p];
      if (id == query) continue;
      const double dist = euclidean_distance(q, coords(p));
      if (dist < best_dist || (dist == best_dist && id < best_id)) {
        best_dist = dist;
        best_id = id;
      }
    }
    return;
  }
  const double gap = q[node.dim] - node.split;
  const std::int32_t near = gap < 0.0 ? node.left : node.right;
  const std::int32_t far = gap < 0.0 ? node.right : node.left;
  search(near, q, query, best_id, best_dist);
  // Points on the far side are at least |gap| away. The slack keeps exact
  // ties (and rounding in the leaf distance) from being pruned.
  const double bound = best_dist + 1e-12 * (1.0 + best_dist);
  if (std::abs(gap) <= bound) search(far, q, query, best_id, best_dist);
}

bool KdTree::nearest(NodeId query, NodeId& best_id, double& best_dist) const {
  best_id = std::numeric_limits<NodeId>::max();
  best_dist = std::numeric_limits<double>::infinity();
  if (nodes_.empty()) return false;
  search(0, ds_->row(query), query, best_id, best_dist);
  return best_id != std::numeric_limits<NodeId>::max();
}

std::vector<std::pair<NodeId, NodeId>> KdTree::nearest_all() const {
  if (points_.size() < 2) throw Error(ErrorCode::EmptyCandidates, "need at least two indexed points");
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(points_.size());
  for (std::uint32_t p = 0; p < points_.size(); ++p) {
    NodeId best_id = std::numeric_limits<NodeId>::max();
    double best_dist = std::numeric_limits<double>::infinity();
    search(0, coords(p), points_[p], best_id, best_dist);
    out.emplace_back(points_[p], best_id);
  }
  return out;
}

}  // namespace dsl
