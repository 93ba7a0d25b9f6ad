#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dsl/dataset.hpp"
#include "dsl/types.hpp"

namespace dsl {

/// Static k-d tree over a subset of dataset rows, Euclidean distance only.
/// Leaf distances are computed exactly like the linear scan so that the
/// (distance, id) argmin is bit-identical.
class KdTree {
 public:
  KdTree(const Dataset& ds, std::vector<NodeId> points, std::size_t leaf_size = 12);

  /// Nearest point other than `query`; returns false if none exists.
  bool nearest(NodeId query, NodeId& best_id, double& best_dist) const;

  /// Nearest other point for every indexed point, as (point, neighbor)
  /// pairs. Queries run in tree order, which keeps the working set local.
  /// Throws EmptyCandidates when fewer than two points are indexed.
  std::vector<std::pair<NodeId, NodeId>> nearest_all() const;

 private:
  struct Node {
    // Leaves: [begin, end) into points_. Inner nodes: split dim/value, children.
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t dim = 0;
    double split = 0.0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::int32_t node, std::span<const double> q, NodeId query, NodeId& best_id,
              double& best_dist) const;
  std::span<const double> coords(std::uint32_t slot) const { return {coords_.data() + slot * d_, d_}; }

  const Dataset* ds_;
  std::size_t d_;
  std::vector<NodeId> points_;
  // Rows of points_ copied in tree order.
  std::vector<double> coords_;
  std::vector<Node> nodes_;
  std::size_t leaf_size_;
};

// Shared by the tree and the linear scan.
double euclidean_distance(std::span<const double> a, std::span<const double> b);

}  // namespace dsl
