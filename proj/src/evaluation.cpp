#include "dsl/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include "dsl/error.hpp"

namespace dsl {

namespace {

std::uint64_t choose2(std::uint64_t x) { return x < 2 ? 0 : x * (x - 1) / 2; }

}  // namespace

void IceTrace::record(IceSample sample) {
  if (samples_.empty() ? sample.queries != 0 : sample.queries <= samples_.back().queries)
    throw std::logic_error("trace samples must start at 0 queries and strictly increase");
  samples_.push_back(sample);
}

std::string IceTrace::to_csv() const {
  std::string out = "queries,ari\n";
  char buf[64];
  for (const auto& s : samples_) {
    out += std::to_string(s.queries);
    out += ',';
    if (s.ari) {
      std::snprintf(buf, sizeof buf, "%.17g", *s.ari);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

double PairCounts::ari() const {
  __extension__ typedef __int128 i128;
  const i128 pairs = static_cast<i128>(choose2(n));
  const i128 sa = together_a;
  const i128 sb = together_b;
  const i128 idx = together_both;
  // ARI = (idx - sa*sb/P) / ((sa+sb)/2 - sa*sb/P), scaled by 2P.
  const i128 num = 2 * (idx * pairs - sa * sb);
  const i128 den = (sa + sb) * pairs - 2 * sa * sb;
  if (den == 0) return (idx == sa && idx == sb) ? 1.0 : 0.0;
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size() || a.empty())
    throw Error(ErrorCode::LengthMismatch, "labelings have lengths " + std::to_string(a.size()) +
                                               " and " + std::to_string(b.size()));
  std::map<std::pair<int, int>, std::uint64_t> cells;
  std::map<int, std::uint64_t> rows;
  std::map<int, std::uint64_t> cols;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ++cells[{a[k], b[k]}];
    ++rows[a[k]];
    ++cols[b[k]];
  }
  PairCounts pc;
  pc.n = a.size();
  for (const auto& [_, c] : cells) pc.together_both += choose2(c);
  for (const auto& [_, c] : rows) pc.together_a += choose2(c);
  for (const auto& [_, c] : cols) pc.together_b += choose2(c);
  return pc.ari();
}

double auic(const IceTrace& trace, std::size_t n) {
  if (trace.empty()) throw Error(ErrorCode::EmptyTrace, "trace has no samples");
  if (n == 0) throw Error(ErrorCode::InvalidSpec, "AUIC needs n >= 1");
  const auto& samples = trace.samples();
  for (const auto& s : samples)
    if (!s.ari) throw Error(ErrorCode::MissingLabels, "trace carries no ARI values");

  std::size_t cursor = 0;
  auto value_at = [&](std::size_t q) {
    while (cursor + 1 < samples.size() && samples[cursor + 1].queries <= q) ++cursor;
    return *samples[cursor].ari;
  };
  double sum = 0.0;
  double prev = value_at(0);
  for (std::size_t i = 1; i <= n; ++i) {
    const double next = value_at(i);
    sum += (prev + next) / 2.0;
    prev = next;
  }
  return sum / static_cast<double>(n);
}

double erroneous_edge_rate(const DataSkeleton& s, std::span<const int> labels) {
  if (labels.size() != s.node_count())
    throw Error(ErrorCode::MissingLabels, "labels cover " + std::to_string(labels.size()) +
                                              " of " + std::to_string(s.node_count()) + " nodes");
  const auto edges = s.edges();
  if (edges.empty()) return 0.0;
  std::size_t bad = 0;
  for (const auto& e : edges)
    if (labels[e.source] != labels[e.target]) ++bad;
  return static_cast<double>(bad) / static_cast<double>(edges.size());
}

double query_upper_bound(double lambda, std::size_t k, std::size_t n) {
  return (1.0 + lambda * static_cast<double>(k)) * static_cast<double>(n);
}

ContingencyTracker::ContingencyTracker(const DataSkeleton& s, Labeling labels)
    : labels_(std::move(labels)), comp_of_(s.node_count()) {
  if (labels_.size() != s.node_count())
    throw Error(ErrorCode::MissingLabels, "labels must cover every node");
  const auto comp = connected_component_labels(s);
  const int count = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  comps_.resize(static_cast<std::size_t>(count));
  std::map<int, std::uint64_t> per_class;
  for (std::size_t v = 0; v < comp.size(); ++v) {
    auto& c = comps_[static_cast<std::size_t>(comp[v])];
    c.live = true;
    ++c.size;
    ++c.per_label[labels_[v]];
    comp_of_[v] = static_cast<std::uint32_t>(comp[v]);
    ++per_class[labels_[v]];
  }
  live_components_ = comps_.size();
  counts_.n = s.node_count();
  for (const auto& c : comps_) {
    counts_.together_a += choose2(c.size);
    for (const auto& [_, m] : c.per_label) counts_.together_both += choose2(m);
  }
  for (const auto& [_, m] : per_class) counts_.together_b += choose2(m);
}

void ContingencyTracker::collect(const DataSkeleton& s, NodeId root, std::vector<NodeId>& out) const {
  out.clear();
  out.push_back(root);
  for (std::size_t k = 0; k < out.size(); ++k)
    for (NodeId child : s.children(out[k])) out.push_back(child);
}

void ContingencyTracker::move_node(NodeId v, std::uint32_t to) {
  const std::uint32_t from = comp_of_[v];
  if (from == to) return;
  auto& a = comps_[from];
  auto& b = comps_[to];
  const int label = labels_[v];
  std::uint64_t& ma = a.per_label[label];
  std::uint64_t& mb = b.per_label[label];
  // C(x,2) - C(x-1,2) = x - 1
  counts_.together_both -= ma - 1;
  counts_.together_both += mb;
  counts_.together_a -= a.size - 1;
  counts_.together_a += b.size;
  --ma;
  ++mb;
  if (ma == 0) a.per_label.erase(label);
  --a.size;
  ++b.size;
  comp_of_[v] = to;
}

void ContingencyTracker::detach(const DataSkeleton& s, NodeId subtree_root) {
  std::uint32_t fresh;
  if (!free_ids_.empty()) {
    fresh = free_ids_.back();
    free_ids_.pop_back();
  } else {
    fresh = static_cast<std::uint32_t>(comps_.size());
    comps_.emplace_back();
  }
  comps_[fresh] = Component{};
  comps_[fresh].live = true;
  ++live_components_;
  const std::uint32_t old = comp_of_[subtree_root];
  std::vector<NodeId> nodes;
  collect(s, subtree_root, nodes);
  for (NodeId v : nodes) move_node(v, fresh);
  if (comps_[old].size == 0) {
    comps_[old].live = false;
    free_ids_.push_back(old);
    --live_components_;
  }
}

void ContingencyTracker::merge(const DataSkeleton& s, NodeId lo, NodeId hi) {
  const std::uint32_t a = comp_of_[lo];
  const std::uint32_t b = comp_of_[hi];
  if (a == b) return;
  const bool lo_smaller = comps_[a].size <= comps_[b].size;
  const NodeId root = lo_smaller ? lo : hi;
  const std::uint32_t into = lo_smaller ? b : a;
  const std::uint32_t from = lo_smaller ? a : b;
  std::vector<NodeId> nodes;
  collect(s, root, nodes);
  for (NodeId v : nodes) move_node(v, into);
  comps_[from] = Component{};
  free_ids_.push_back(from);
  --live_components_;
}

}  // namespace dsl
