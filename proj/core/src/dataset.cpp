#include "sdf/dataset.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sdf {

Dataset::Dataset(std::vector<double> features, std::size_t n_features,
                 std::vector<ClassIndex> labels, ClassIndex n_classes)
    : features_(std::move(features)),
      n_features_(n_features),
      labels_(std::move(labels)),
      n_classes_(n_classes) {
  if (n_classes_ < 2) {
    throw std::invalid_argument("Dataset: n_classes must be at least 2");
  }
  if (n_features_ < 1) {
    throw std::invalid_argument("Dataset: n_features must be at least 1");
  }
  if (features_.size() != labels_.size() * n_features_) {
    throw std::invalid_argument("Dataset: feature matrix has " + std::to_string(features_.size()) +
                                " values, expected " +
                                std::to_string(labels_.size() * n_features_));
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] < 0 || labels_[i] >= n_classes_) {
      throw std::invalid_argument("Dataset: label " + std::to_string(labels_[i]) + " at row " +
                                  std::to_string(i) + " is outside [0, " +
                                  std::to_string(n_classes_) + ")");
    }
  }
  for (std::size_t k = 0; k < features_.size(); ++k) {
    if (!std::isfinite(features_[k])) {
      throw std::invalid_argument("Dataset: non-finite feature at row " +
                                  std::to_string(k / n_features_) + ", column " +
                                  std::to_string(k % n_features_));
    }
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.n_features_ = n_features_;
  out.n_classes_ = n_classes_;
  out.features_.reserve(indices.size() * n_features_);
  out.labels_.reserve(indices.size());
  for (const std::size_t i : indices) {
    if (i >= n_samples()) {
      throw std::out_of_range("Dataset::subset: index " + std::to_string(i) + " out of range");
    }
    const auto r = row(i);
    out.features_.insert(out.features_.end(), r.begin(), r.end());
    out.labels_.push_back(labels_[i]);
  }
  return out;
}

Dataset Dataset::with_classes(ClassIndex n_classes) const {
  return Dataset(features_, n_features_, labels_, n_classes);
}

std::vector<std::uint64_t> class_histogram(const Dataset& data,
                                           std::span<const std::size_t> indices) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(data.n_classes()), 0);
  for (const std::size_t i : indices) {
    ++counts[static_cast<std::size_t>(data.label(i))];
  }
  return counts;
}

}  // namespace sdf
