#include "dsl/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dsl/error.hpp"

namespace dsl {

DataSkeleton::DataSkeleton(std::size_t n) : out_(n), children_(n) {
  for (std::size_t i = 0; i < n; ++i) reps_.insert(reps_.end(), static_cast<NodeId>(i));
}

void DataSkeleton::insert_representative(NodeId node) {
  if (node >= node_count()) throw std::out_of_range("representative out of range");
  reps_.insert(node);
}

void DataSkeleton::erase_representative(NodeId node) { reps_.erase(node); }

void DataSkeleton::add_edge(NodeId source, NodeId target, double distance, bool confirmed) {
  if (source >= node_count() || target >= node_count())
    throw std::out_of_range("edge endpoint out of range");
  if (source == target) throw std::logic_error("self edge " + std::to_string(source));
  if (out_[source]) throw std::logic_error("node " + std::to_string(source) + " already has an edge");
  if (!std::isfinite(distance) || distance < 0.0)
    throw Error(ErrorCode::InvalidSpec, "edge distance must be finite and nonnegative");
  SkeletonEdge e{source, target, distance, confirmed};
  out_[source] = e;
  children_[target].push_back(source);
  ++edge_count_;
  if (!confirmed) {
    ++unconfirmed_;
    suspects_.push_back(e);
    std::push_heap(suspects_.begin(), suspects_.end(), SuspectOrder{});
  }
}

SkeletonEdge DataSkeleton::remove_edge(NodeId source) {
  auto& slot = out_.at(source);
  if (!slot) throw std::logic_error("node " + std::to_string(source) + " has no edge");
  SkeletonEdge e = *slot;
  slot.reset();
  auto& kids = children_[e.target];
  auto it = std::find(kids.begin(), kids.end(), source);
  *it = kids.back();
  kids.pop_back();
  --edge_count_;
  if (!e.confirmed) {
    --unconfirmed_;
    prune_suspects();
  }
  return e;
}

void DataSkeleton::confirm_edge(NodeId source) {
  auto& slot = out_.at(source);
  if (!slot) throw std::logic_error("node " + std::to_string(source) + " has no edge");
  if (slot->confirmed) return;
  slot->confirmed = true;
  --unconfirmed_;
  prune_suspects();
}

bool DataSkeleton::is_live_suspect(const SkeletonEdge& e) const {
  const auto& slot = out_[e.source];
  return slot && !slot->confirmed && slot->target == e.target && slot->distance == e.distance;
}

void DataSkeleton::prune_suspects() {
  while (!suspects_.empty() && !is_live_suspect(suspects_.front())) {
    std::pop_heap(suspects_.begin(), suspects_.end(), SuspectOrder{});
    suspects_.pop_back();
  }
  if (suspects_.empty()) suspects_.shrink_to_fit();
}

std::optional<SkeletonEdge> DataSkeleton::max_suspicious_edge() const {
  if (suspects_.empty()) return std::nullopt;
  return suspects_.front();
}

NodeId DataSkeleton::root_of(NodeId node) const {
  std::size_t guard = 0;
  while (out_.at(node)) {
    node = out_[node]->target;
    if (++guard > node_count()) throw std::logic_error("cycle in skeleton");
  }
  return node;
}

std::vector<SkeletonEdge> DataSkeleton::edges() const {
  std::vector<SkeletonEdge> result;
  result.reserve(edge_count_);
  for (const auto& e : out_)
    if (e) result.push_back(*e);
  return result;
}

void DataSkeleton::check_invariants(bool quiescent) const {
  const std::size_t n = node_count();
  std::vector<std::size_t> indeg(n, 0);
  std::size_t edges = 0;
  std::size_t unconfirmed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!out_[i]) continue;
    const auto& e = *out_[i];
    if (e.source != i) throw std::logic_error("edge source mismatch at " + std::to_string(i));
    if (e.target == e.source) throw std::logic_error("self edge at " + std::to_string(i));
    if (!std::isfinite(e.distance) || e.distance < 0.0)
      throw std::logic_error("bad distance at " + std::to_string(i));
    ++indeg[e.target];
    ++edges;
    if (!e.confirmed) ++unconfirmed;
  }
  if (edges != edge_count_) throw std::logic_error("edge count out of sync");
  if (unconfirmed != unconfirmed_) throw std::logic_error("unconfirmed count out of sync");
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] != children_[i].size())
      throw std::logic_error("in-degree out of sync at " + std::to_string(i));

  // Acyclic: walk each node up with memoized colors.
  std::vector<char> state(n, 0);  // 0 unseen, 1 on path, 2 done
  std::vector<NodeId> path;
  for (std::size_t start = 0; start < n; ++start) {
    NodeId v = static_cast<NodeId>(start);
    path.clear();
    while (state[v] == 0) {
      state[v] = 1;
      path.push_back(v);
      if (!out_[v]) break;
      v = out_[v]->target;
      if (state[v] == 1) throw std::logic_error("cycle through node " + std::to_string(v));
    }
    for (NodeId p : path) state[p] = 2;
  }

  if (quiescent) {
    for (std::size_t i = 0; i < n; ++i) {
      const bool root = !out_[i];
      if (root != reps_.contains(static_cast<NodeId>(i)))
        throw std::logic_error("representative set mismatch at " + std::to_string(i));
    }
  }
}

std::vector<int> connected_component_labels(const DataSkeleton& s) {
  const std::size_t n = s.node_count();
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), NodeId{0});
  auto find = [&](NodeId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = s.out_edge(static_cast<NodeId>(i));
    if (!e) continue;
    NodeId a = find(e->source);
    NodeId b = find(e->target);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> labels(n, -1);
  std::vector<int> by_root(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    NodeId r = find(static_cast<NodeId>(i));
    if (by_root[r] < 0) by_root[r] = next++;
    labels[i] = by_root[r];
  }
  return labels;
}

nlohmann::ordered_json skeleton_to_json(const DataSkeleton& s) {
  nlohmann::ordered_json doc;
  doc["n"] = s.node_count();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : s.edges()) {
    edges.push_back(nlohmann::ordered_json{
        {"src", e.source}, {"dst", e.target}, {"dist", e.distance}, {"confirmed", e.confirmed}});
  }
  doc["edges"] = std::move(edges);
  doc["representatives"] = std::vector<NodeId>(s.representatives().begin(), s.representatives().end());
  return doc;
}

DataSkeleton skeleton_from_json(const nlohmann::ordered_json& doc) {
  DataSkeleton s(doc.at("n").get<std::size_t>());
  s.clear_representatives();
  for (const auto& e : doc.at("edges")) {
    s.add_edge(e.at("src").get<NodeId>(), e.at("dst").get<NodeId>(), e.at("dist").get<double>(),
               e.at("confirmed").get<bool>());
  }
  for (const auto& r : doc.at("representatives")) s.insert_representative(r.get<NodeId>());
  return s;
}

}  // namespace dsl
