#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsl/types.hpp"

namespace dsl {

struct SkeletonEdge {
  NodeId source = 0;
  NodeId target = 0;
  double distance = 0.0;
  // A verified must-link. The original distance is kept.
  bool confirmed = false;

  friend bool operator==(const SkeletonEdge&, const SkeletonEdge&) = default;
};

/// Sparse directed forest: every node has at most one outgoing edge, and the
/// roots of the forest are tracked as the representative set.
///
/// The representative set is managed explicitly by the algorithms; it equals
/// the set of zero out-degree nodes whenever no refinement step is in flight.
class DataSkeleton {
 public:
  DataSkeleton() = default;
  /// n isolated nodes, each its own representative.
  explicit DataSkeleton(std::size_t n);

  std::size_t node_count() const noexcept { return out_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::size_t unconfirmed_count() const noexcept { return unconfirmed_; }

  const std::optional<SkeletonEdge>& out_edge(NodeId node) const { return out_.at(node); }
  std::size_t in_degree(NodeId node) const { return children_.at(node).size(); }
  std::span<const NodeId> children(NodeId node) const { return children_.at(node); }

  const std::set<NodeId>& representatives() const noexcept { return reps_; }
  bool is_representative(NodeId node) const { return reps_.contains(node); }
  void insert_representative(NodeId node);
  void erase_representative(NodeId node);
  void clear_representatives() { reps_.clear(); }

  /// Requires source != target and that source has no outgoing edge.
  void add_edge(NodeId source, NodeId target, double distance, bool confirmed);
  /// Removes and returns the outgoing edge of source.
  SkeletonEdge remove_edge(NodeId source);
  void confirm_edge(NodeId source);

  /// Unconfirmed edge of maximum distance; ties by smallest (source, target).
  std::optional<SkeletonEdge> max_suspicious_edge() const;

  /// Root of the tree that contains node. O(depth).
  NodeId root_of(NodeId node) const;

  /// Edges ordered by source.
  std::vector<SkeletonEdge> edges() const;

  /// Throws std::logic_error describing the first violated structural invariant.
  /// When `quiescent`, also checks representatives == zero out-degree nodes.
  void check_invariants(bool quiescent = true) const;

 private:
  // Heap order: the front is the largest distance, then the smallest (source, target).
  struct SuspectOrder {
    bool operator()(const SkeletonEdge& a, const SkeletonEdge& b) const noexcept {
      if (a.distance != b.distance) return a.distance < b.distance;
      if (a.source != b.source) return a.source > b.source;
      return a.target > b.target;
    }
  };

  bool is_live_suspect(const SkeletonEdge& e) const;
  void prune_suspects();

  std::vector<std::optional<SkeletonEdge>> out_;
  std::vector<std::vector<NodeId>> children_;
  std::set<NodeId> reps_;
  // Max-heap of unconfirmed edges with lazy deletion: entries whose edge was
  // removed or confirmed are dropped once they reach the front, so the
  // front is always live.
  std::vector<SkeletonEdge> suspects_;
  std::size_t unconfirmed_ = 0;
  std::size_t edge_count_ = 0;
};

inline std::optional<SkeletonEdge> max_suspicious_edge(const DataSkeleton& s) {
  return s.max_suspicious_edge();
}

/// Weakly connected component ids, numbered in order of each component's
/// smallest node id.
std::vector<int> connected_component_labels(const DataSkeleton& s);

/// {"n", "edges": [{"src","dst","dist","confirmed"}], "representatives"}
nlohmann::ordered_json skeleton_to_json(const DataSkeleton& s);
DataSkeleton skeleton_from_json(const nlohmann::ordered_json& doc);

}  // namespace dsl
