#include <algorithm>
#include <limits>
#include <vector>

#include "dsl/engine.hpp"
#include "dsl/error.hpp"

namespace dsl {

DataSkeleton ds_init(const Dataset& ds, const Metric& metric, std::uint64_t seed,
                     std::size_t index_threshold) {
  metric.validate(ds);
  const std::size_t n = ds.size();
  TieBreaker ties(seed);
  constexpr NodeId none = std::numeric_limits<NodeId>::max();

  std::vector<NodeId> reps(n);
  for (std::size_t i = 0; i < n; ++i) reps[i] = static_cast<NodeId>(i);
  std::vector<NodeId> parent(n, none);
  std::vector<std::uint32_t> in_degree(n, 0);
  std::vector<NodeId> nearest(n, none);

  while (reps.size() > 1) {
    const NeighborIndex index(metric, ds, reps, index_threshold);
    for (const auto& [r, nn] : index.nearest_all()) {
      parent[r] = nearest[r] = nn;
      ++in_degree[nn];
    }

    // Only 2-cycles exist in the (distance, id) nearest-neighbor graph, so
    // every weakly connected part contributes exactly one reciprocal pair.
    std::vector<NodeId> next;
    for (NodeId a : reps) {
      const NodeId b = nearest[a];
      if (b < a || nearest[b] != a) continue;
      const NodeId keep = in_degree[a] > in_degree[b]   ? a
                          : in_degree[b] > in_degree[a] ? b
                                                        : ties.pick(a, b);
      --in_degree[parent[keep]];
      parent[keep] = none;
      next.push_back(keep);
    }
    std::sort(next.begin(), next.end());
    reps = std::move(next);
  }

  DataSkeleton skeleton(n);
  for (std::size_t i = 0; i < n; ++i)
    if (parent[i] != none) {
      const auto v = static_cast<NodeId>(i);
      skeleton.add_edge(v, parent[i], metric(ds, v, parent[i]), false);
    }
  skeleton.clear_representatives();
  skeleton.insert_representative(reps.front());
  return skeleton;
}

}  // namespace dsl
