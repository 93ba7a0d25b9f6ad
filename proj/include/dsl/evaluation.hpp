#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dsl/skeleton.hpp"
#include "dsl/types.hpp"

namespace dsl {

struct IceSample {
  std::size_t queries = 0;
  std::optional<double> ari;  // absent when the dataset has no labels
  std::size_t clusters = 0;

  friend bool operator==(const IceSample&, const IceSample&) = default;
};

/// ARI against the cumulative number of oracle answers; queries strictly
/// increasing, first sample at 0.
class IceTrace {
 public:
  void record(IceSample sample);
  const std::vector<IceSample>& samples() const noexcept { return samples_; }
  bool empty() const noexcept { return samples_.empty(); }
  const IceSample& back() const { return samples_.back(); }

  /// Header "queries,ari"; ARI printed with 17 significant digits, empty if absent.
  std::string to_csv() const;

  friend bool operator==(const IceTrace&, const IceTrace&) = default;

 private:
  std::vector<IceSample> samples_;
};

/// Pair-counting sums of a contingency table. ARI is evaluated in exact
/// 128-bit integer arithmetic up to the final division.
struct PairCounts {
  std::uint64_t n = 0;
  std::uint64_t together_both = 0;   // sum over cells of C(n_ij, 2)
  std::uint64_t together_a = 0;      // sum over rows of C(a_i, 2)
  std::uint64_t together_b = 0;      // sum over columns of C(b_j, 2)

  double ari() const;
};

/// Throws LengthMismatch for unequal or empty inputs.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

/// Trapezoidal mean of ARI over the first n constraints. Between samples the
/// last value is carried forward, and past the end of the trace the final
/// value is held. Throws EmptyTrace, or MissingLabels if a sample has no ARI.
double auic(const IceTrace& trace, std::size_t n);

/// Fraction of skeleton edges that join differently labeled nodes.
double erroneous_edge_rate(const DataSkeleton& s, std::span<const int> labels);

/// (1 + lambda * k) * n
double query_upper_bound(double lambda, std::size_t k, std::size_t n);

/// Incrementally maintained contingency table between the skeleton's
/// connected components and a fixed ground-truth labeling.
///
/// The caller reports structural changes: `detach(v)` after v's outgoing edge
/// was removed, and `merge(lo, hi)` before the edge lo -> hi is added between
/// two tree roots. Cost is proportional to the moved subtree, with merges
/// relabeling the smaller side.
class ContingencyTracker {
 public:
  ContingencyTracker(const DataSkeleton& s, Labeling labels);

  void detach(const DataSkeleton& s, NodeId subtree_root);
  void merge(const DataSkeleton& s, NodeId lo, NodeId hi);

  double ari() const { return counts_.ari(); }
  const PairCounts& counts() const noexcept { return counts_; }
  std::size_t component_count() const noexcept { return live_components_; }

 private:
  struct Component {
    std::size_t size = 0;
    std::unordered_map<int, std::uint64_t> per_label;
    bool live = false;
  };

  void move_node(NodeId v, std::uint32_t to);
  void collect(const DataSkeleton& s, NodeId root, std::vector<NodeId>& out) const;

  Labeling labels_;
  std::vector<std::uint32_t> comp_of_;
  std::vector<Component> comps_;
  std::vector<std::uint32_t> free_ids_;
  std::size_t live_components_ = 0;
  PairCounts counts_;
};

}  // namespace dsl
