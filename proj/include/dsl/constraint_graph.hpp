#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "dsl/types.hpp"

namespace dsl {

struct PairwiseConstraint {
  NodeId a = 0;
  NodeId b = 0;
  Theta theta = Theta::MustLink;

  friend bool operator==(const PairwiseConstraint&, const PairwiseConstraint&) = default;
};

struct ConstraintArc {
  NodeId to = 0;
  Theta theta = Theta::MustLink;
};

using ConstraintAdjacency = std::vector<std::vector<ConstraintArc>>;

/// Minimum theta-sum over all i-j paths, or nullopt when disconnected.
/// 0/1 breadth-first search with a deque; linear in the visited edges.
/// Works on arbitrary adjacency, including graphs that contain conflicts.
std::optional<std::size_t> shortest_constraint_path_length(
    std::span<const std::vector<ConstraintArc>> adjacency, NodeId i, NodeId j);

/// Undirected graph of oracle-provided constraints only.
///
/// Besides adjacency, the graph keeps an index of its must-link components
/// (union-find) together with the cannot-link edge endpoints leaving each
/// component. Because every stored edge has weight 0 or 1, a pair is at path
/// length 0 iff it shares a component and at length 1 iff a cannot-link edge
/// joins the two components, so `classify` answers the capped shortest-path
/// question without walking the graph.
class MinimalConstraintGraph {
 public:
  MinimalConstraintGraph() = default;
  explicit MinimalConstraintGraph(std::size_t node_count);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return constraints_.size(); }

  /// Throws DuplicatePair if the pair is stored, DeduciblePair if the pair is
  /// already at path length 0 or 1.
  void add_constraint(const PairwiseConstraint& c);

  std::optional<Theta> stored(NodeId a, NodeId b) const;
  std::span<const ConstraintArc> neighbors(NodeId node) const { return adjacency_.at(node); }
  const ConstraintAdjacency& adjacency() const noexcept { return adjacency_; }
  /// In insertion order.
  const std::vector<PairwiseConstraint>& constraints() const noexcept { return constraints_; }

  std::optional<std::size_t> shortest_path_length(NodeId i, NodeId j) const {
    return shortest_constraint_path_length(adjacency_, i, j);
  }

  /// Shortest theta-sum capped at 1: 0, 1, or nullopt for "longer or none".
  std::optional<Theta> classify(NodeId i, NodeId j) const;

 private:
  static std::uint64_t pair_key(NodeId a, NodeId b) noexcept;
  NodeId find(NodeId node) const;
  void unite(NodeId a, NodeId b);

  ConstraintAdjacency adjacency_;
  std::vector<PairwiseConstraint> constraints_;
  std::unordered_map<std::uint64_t, Theta> by_pair_;

  std::vector<NodeId> parent_;
  std::vector<std::uint32_t> size_;
  // For each component root: the far endpoint of every cannot-link edge
  // with one endpoint inside the component.
  std::vector<std::vector<NodeId>> cannot_ends_;
};

}  // namespace dsl
