#include "dsl/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "dsl/error.hpp"

namespace dsl {

Dataset::Dataset(std::size_t n, std::size_t d, std::vector<double> values)
    : n_(n), d_(d), values_(std::move(values)) {
  if (n == 0) throw Error(ErrorCode::InvalidSpec, "dataset needs at least one row");
  if (values_.size() != n * d)
    throw Error(ErrorCode::InvalidSpec, "dataset has " + std::to_string(values_.size()) +
                                            " values, expected " + std::to_string(n * d));
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k]))
      throw Error(ErrorCode::NonFiniteValue, "non-finite value at row " + std::to_string(k / d + 1) +
                                                 ", column " + std::to_string(k % d + 1));
  }
}

void Dataset::set_labels(Labeling labels, std::vector<std::string> names) {
  if (labels.size() != n_)
    throw Error(ErrorCode::MissingLabels, "labels must cover all " + std::to_string(n_) + " rows");
  for (int l : labels)
    if (l < 0) throw Error(ErrorCode::InvalidSpec, "labels must be nonnegative");
  labels_ = std::move(labels);
  label_names_ = std::move(names);
}

std::size_t Dataset::class_count() const {
  if (!labels_) return 0;
  std::set<int> distinct(labels_->begin(), labels_->end());
  return distinct.size();
}

void Dataset::set_ids(std::vector<std::string> ids) {
  if (!ids.empty() && ids.size() != n_)
    throw Error(ErrorCode::InvalidSpec, "ids must cover all rows");
  ids_ = std::move(ids);
}

std::string Dataset::id_of(NodeId i) const {
  if (ids_.empty()) return std::to_string(i);
  return ids_.at(i);
}

void Dataset::set_feature_names(std::vector<std::string> names) {
  if (!names.empty() && names.size() != d_)
    throw Error(ErrorCode::InvalidSpec, "feature names must cover all columns");
  feature_names_ = std::move(names);
}

}  // namespace dsl
