#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dsl/dataset.hpp"
#include "dsl/types.hpp"

namespace dsl {

class KdTree;

enum class MetricKind { Euclidean, Cosine, Random, Precomputed };

/// Symmetric, zero on the diagonal, nonnegative and finite. The triangle
/// inequality is not assumed anywhere.
class Metric {
 public:
  static Metric euclidean() { return Metric(MetricKind::Euclidean); }
  static Metric cosine() { return Metric(MetricKind::Cosine); }
  static Metric random(std::uint64_t seed);
  /// Row-major n x n matrix. Validated against a dataset on first use.
  static Metric precomputed(std::size_t n, std::vector<double> matrix);

  MetricKind kind() const noexcept { return kind_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::string name() const;

  /// Throws DimensionMismatch if a precomputed matrix does not match ds.
  void validate(const Dataset& ds) const;

  double operator()(const Dataset& ds, NodeId i, NodeId j) const;

 private:
  explicit Metric(MetricKind kind) : kind_(kind) {}

  MetricKind kind_;
  std::uint64_t seed_ = 0;
  std::size_t matrix_n_ = 0;
  std::shared_ptr<const std::vector<double>> matrix_;
};

inline double distance(const Metric& m, const Dataset& ds, NodeId i, NodeId j) {
  return m(ds, i, j);
}

/// Loads an n x n header-free CSV distance matrix.
Metric load_distance_matrix(const std::string& path);

inline constexpr std::size_t kDefaultIndexThreshold = 256;
inline constexpr std::size_t kMaxIndexedDims = 16;

/// Nearest-neighbor queries restricted to a fixed candidate set.
///
/// Euclidean data with at most 16 dimensions and at least `index_threshold`
/// candidates goes through a k-d tree; everything else is a linear scan. Both
/// paths return the same node: the argmin of `distance`, ties to the
/// smallest id, never the query node itself.
class NeighborIndex {
 public:
  NeighborIndex(const Metric& metric, const Dataset& ds, std::vector<NodeId> candidates,
                std::size_t index_threshold = kDefaultIndexThreshold);
  ~NeighborIndex();
  NeighborIndex(NeighborIndex&&) noexcept;
  NeighborIndex& operator=(NeighborIndex&&) noexcept;

  bool uses_tree() const noexcept { return tree_ != nullptr; }

  /// Throws EmptyCandidates if no candidate other than i exists.
  NodeId nearest(NodeId i) const;
  NodeId nearest_linear(NodeId i) const;
  /// nearest(c) for every candidate c, as (c, neighbor) pairs in unspecified order.
  std::vector<std::pair<NodeId, NodeId>> nearest_all() const;

 private:
  Metric metric_;
  const Dataset* ds_;
  std::vector<NodeId> candidates_;
  std::unique_ptr<KdTree> tree_;
};

NodeId nearest_neighbor(const Metric& m, const Dataset& ds, NodeId i,
                        std::span<const NodeId> candidates,
                        std::size_t index_threshold = kDefaultIndexThreshold);

}  // namespace dsl
