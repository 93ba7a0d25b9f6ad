#include "dsl/constraint_graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dsl/error.hpp"

namespace dsl {

std::optional<std::size_t> shortest_constraint_path_length(
    std::span<const std::vector<ConstraintArc>> adjacency, NodeId i, NodeId j) {
  if (i >= adjacency.size() || j >= adjacency.size())
    throw std::out_of_range("constraint graph node out of range");
  if (i == j) return 0;
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(adjacency.size(), kInf);
  std::deque<NodeId> queue;
  dist[i] = 0;
  queue.push_back(i);
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    if (u == j) return dist[u];
    for (const auto& arc : adjacency[u]) {
      const std::size_t w = static_cast<std::size_t>(theta_weight(arc.theta));
      if (dist[u] + w < dist[arc.to]) {
        dist[arc.to] = dist[u] + w;
        if (w == 0)
          queue.push_front(arc.to);
        else
          queue.push_back(arc.to);
      }
    }
  }
  return std::nullopt;
}

MinimalConstraintGraph::MinimalConstraintGraph(std::size_t node_count)
    : adjacency_(node_count), parent_(node_count), size_(node_count, 1), cannot_ends_(node_count) {
  std::iota(parent_.begin(), parent_.end(), NodeId{0});
}

std::uint64_t MinimalConstraintGraph::pair_key(NodeId a, NodeId b) noexcept {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

NodeId MinimalConstraintGraph::find(NodeId node) const {
  while (parent_[node] != node) node = parent_[node];
  return node;
}

void MinimalConstraintGraph::unite(NodeId a, NodeId b) {
  a = find(a);
  b = find(b);
  if (a == b) return;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  auto& into = cannot_ends_[a];
  auto& from = cannot_ends_[b];
  into.insert(into.end(), from.begin(), from.end());
  from.clear();
  from.shrink_to_fit();
}

std::optional<Theta> MinimalConstraintGraph::stored(NodeId a, NodeId b) const {
  auto it = by_pair_.find(pair_key(a, b));
  if (it == by_pair_.end()) return std::nullopt;
  return it->second;
}

std::optional<Theta> MinimalConstraintGraph::classify(NodeId i, NodeId j) const {
  if (i >= node_count() || j >= node_count())
    throw std::out_of_range("constraint graph node out of range");
  const NodeId ri = find(i);
  const NodeId rj = find(j);
  if (ri == rj) return Theta::MustLink;
  const auto& ei = cannot_ends_[ri];
  const auto& ej = cannot_ends_[rj];
  const bool scan_i = ei.size() <= ej.size();
  const NodeId other = scan_i ? rj : ri;
  for (NodeId end : scan_i ? ei : ej)
    if (find(end) == other) return Theta::CannotLink;
  return std::nullopt;
}

void MinimalConstraintGraph::add_constraint(const PairwiseConstraint& c) {
  if (c.a == c.b) throw std::logic_error("constraint on a single node " + std::to_string(c.a));
  if (c.a >= node_count() || c.b >= node_count())
    throw std::out_of_range("constraint endpoint out of range");
  const auto key = pair_key(c.a, c.b);
  if (by_pair_.contains(key))
    throw Error(ErrorCode::DuplicatePair, "constraint for (" + std::to_string(c.a) + ", " +
                                              std::to_string(c.b) + ") already stored");
  if (classify(c.a, c.b))
    throw Error(ErrorCode::DeduciblePair, "constraint for (" + std::to_string(c.a) + ", " +
                                              std::to_string(c.b) + ") is already deducible");
  by_pair_.emplace(key, c.theta);
  adjacency_[c.a].push_back({c.b, c.theta});
  adjacency_[c.b].push_back({c.a, c.theta});
  constraints_.push_back(c);
  if (c.theta == Theta::MustLink) {
    unite(c.a, c.b);
  } else {
    cannot_ends_[find(c.a)].push_back(c.b);
    cannot_ends_[find(c.b)].push_back(c.a);
  }
}

}  // namespace dsl
