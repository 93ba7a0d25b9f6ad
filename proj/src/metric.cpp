#include "dsl/metric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dsl/error.hpp"
#include "dsl/kdtree.hpp"
#include "dsl/random.hpp"

namespace dsl {

namespace {

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0.0 && nb == 0.0) return 0.0;
  if (na == 0.0 || nb == 0.0) return 1.0;
  const double sim = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(1.0 - sim, 0.0, 2.0);
}

}  // namespace

Metric Metric::random(std::uint64_t seed) {
  Metric m(MetricKind::Random);
  m.seed_ = seed;
  return m;
}

Metric Metric::precomputed(std::size_t n, std::vector<double> matrix) {
  if (matrix.size() != n * n)
    throw Error(ErrorCode::DimensionMismatch, "distance matrix has " + std::to_string(matrix.size()) +
                                                  " entries, expected " + std::to_string(n * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = matrix[i * n + j];
      if (!std::isfinite(v) || v < 0.0)
        throw Error(ErrorCode::NonFiniteValue, "distance matrix entry (" + std::to_string(i + 1) +
                                                   ", " + std::to_string(j + 1) +
                                                   ") must be finite and nonnegative");
    }
  }
  Metric m(MetricKind::Precomputed);
  m.matrix_n_ = n;
  m.matrix_ = std::make_shared<const std::vector<double>>(std::move(matrix));
  return m;
}

std::string Metric::name() const {
  switch (kind_) {
    case MetricKind::Euclidean: return "euclidean";
    case MetricKind::Cosine: return "cosine";
    case MetricKind::Random: return "random";
    case MetricKind::Precomputed: return "matrix";
  }
  return "unknown";
}

void Metric::validate(const Dataset& ds) const {
  if (kind_ == MetricKind::Precomputed && matrix_n_ != ds.size())
    throw Error(ErrorCode::DimensionMismatch, "distance matrix is " + std::to_string(matrix_n_) +
                                                  "x" + std::to_string(matrix_n_) + " but dataset has " +
                                                  std::to_string(ds.size()) + " rows");
}

double Metric::operator()(const Dataset& ds, NodeId i, NodeId j) const {
  if (i == j) return 0.0;
  switch (kind_) {
    case MetricKind::Euclidean: return euclidean_distance(ds.row(i), ds.row(j));
    case MetricKind::Cosine: return cosine_distance(ds.row(i), ds.row(j));
    case MetricKind::Random: {
      const std::uint64_t lo = std::min(i, j);
      const std::uint64_t hi = std::max(i, j);
      return to_open_unit(mix64(mix64(seed_ ^ (lo << 32 | hi)) + seed_));
    }
    case MetricKind::Precomputed: {
      // Symmetrize so that asymmetric input still yields a metric-like view.
      const std::size_t a = std::min(i, j);
      const std::size_t b = std::max(i, j);
      return (*matrix_)[a * matrix_n_ + b];
    }
  }
  return 0.0;
}

Metric load_distance_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open distance matrix " + path);
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++rows;
    std::size_t count = 0;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      ++count;
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str())
        throw Error(ErrorCode::ParseError, "distance matrix row " + std::to_string(rows) +
                                               ", column " + std::to_string(count) + ": not a number");
      values.push_back(v);
    }
    if (cols == 0) cols = count;
    if (count != cols)
      throw Error(ErrorCode::DimensionMismatch, "distance matrix row " + std::to_string(rows) +
                                                    " has " + std::to_string(count) + " columns");
  }
  if (rows == 0) throw Error(ErrorCode::EmptyFile, "distance matrix " + path + " is empty");
  if (rows != cols)
    throw Error(ErrorCode::DimensionMismatch, "distance matrix must be square");
  return Metric::precomputed(rows, std::move(values));
}

NeighborIndex::NeighborIndex(const Metric& metric, const Dataset& ds, std::vector<NodeId> candidates,
                             std::size_t index_threshold)
    : metric_(metric), ds_(&ds), candidates_(std::move(candidates)) {
  if (metric.kind() == MetricKind::Euclidean && ds.dims() <= kMaxIndexedDims &&
      candidates_.size() >= index_threshold) {
    tree_ = std::make_unique<KdTree>(ds, candidates_);
  }
}

NeighborIndex::~NeighborIndex() = default;
NeighborIndex::NeighborIndex(NeighborIndex&&) noexcept = default;
NeighborIndex& NeighborIndex::operator=(NeighborIndex&&) noexcept = default;

NodeId NeighborIndex::nearest_linear(NodeId i) const {
  NodeId best_id = std::numeric_limits<NodeId>::max();
  double best = std::numeric_limits<double>::infinity();
  for (NodeId c : candidates_) {
    if (c == i) continue;
    const double d = metric_(*ds_, i, c);
    if (d < best || (d == best && c < best_id)) {
      best = d;
      best_id = c;
    }
  }
  if (best_id == std::numeric_limits<NodeId>::max())
    throw Error(ErrorCode::EmptyCandidates, "no candidate other than node " + std::to_string(i));
  return best_id;
}

NodeId NeighborIndex::nearest(NodeId i) const {
  if (!tree_) return nearest_linear(i);
  NodeId best_id = 0;
  double best = 0.0;
  if (!tree_->nearest(i, best_id, best))
    throw Error(ErrorCode::EmptyCandidates, "no candidate other than node " + std::to_string(i));
  return best_id;
}

std::vector<std::pair<NodeId, NodeId>> NeighborIndex::nearest_all() const {
  if (tree_) return tree_->nearest_all();
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(candidates_.size());
  for (NodeId c : candidates_) out.emplace_back(c, nearest_linear(c));
  return out;
}

NodeId nearest_neighbor(const Metric& m, const Dataset& ds, NodeId i, std::span<const NodeId> candidates,
                        std::size_t index_threshold) {
  NeighborIndex index(m, ds, std::vector<NodeId>(candidates.begin(), candidates.end()), index_threshold);
  return index.nearest(i);
}

}  // namespace dsl
