#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsl/types.hpp"

namespace dsl {

/// Row-major n x d matrix of finite features plus optional metadata.
/// The clustering engine only ever reads `row`; labels feed the simulated
/// oracle and the evaluation metrics.
class Dataset {
 public:
  Dataset() = default;
  /// Throws InvalidSpec on shape problems, NonFiniteValue on NaN/inf.
  Dataset(std::size_t n, std::size_t d, std::vector<double> values);

  std::size_t size() const noexcept { return n_; }
  std::size_t dims() const noexcept { return d_; }

  std::span<const double> row(NodeId i) const {
    return {values_.data() + static_cast<std::size_t>(i) * d_, d_};
  }
  std::span<double> mutable_row(NodeId i) {
    return {values_.data() + static_cast<std::size_t>(i) * d_, d_};
  }
  const std::vector<double>& values() const noexcept { return values_; }

  bool has_labels() const noexcept { return labels_.has_value(); }
  const std::optional<Labeling>& labels() const noexcept { return labels_; }
  /// Dense labels in [0, k); `names` maps each id back to its source text.
  void set_labels(Labeling labels, std::vector<std::string> names = {});
  const std::vector<std::string>& label_names() const noexcept { return label_names_; }
  std::size_t class_count() const;

  const std::vector<std::string>& ids() const noexcept { return ids_; }
  void set_ids(std::vector<std::string> ids);
  /// External id of row i, or its index when no ids are attached.
  std::string id_of(NodeId i) const;

  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  void set_feature_names(std::vector<std::string> names);

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> values_;
  std::optional<Labeling> labels_;
  std::vector<std::string> label_names_;
  std::vector<std::string> ids_;
  std::vector<std::string> feature_names_;
};

}  // namespace dsl
