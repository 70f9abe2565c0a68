#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sdf {

using ClassIndex = std::int32_t;

/// Read-only row-major view of a feature matrix.
struct MatrixView {
  std::span<const double> values;
  std::size_t n_cols = 0;

  std::size_t rows() const { return n_cols == 0 ? 0 : values.size() / n_cols; }
  std::span<const double> row(std::size_t i) const { return values.subspan(i * n_cols, n_cols); }
};

/// Dense numeric features plus integer class labels in {0..n_classes-1}.
///
/// Features are stored row-major. The class count is declared up front and
/// may exceed the number of classes actually present in the labels.
class Dataset {
 public:
  Dataset() = default;

  /// Throws std::invalid_argument when `features.size()` is not a multiple of
  /// `n_features` matching `labels.size()`, when a label is outside
  /// [0, n_classes), when a feature is not finite, or when n_classes < 2 or
  /// n_features < 1.
  Dataset(std::vector<double> features, std::size_t n_features, std::vector<ClassIndex> labels,
          ClassIndex n_classes);

  std::size_t n_samples() const { return labels_.size(); }
  std::size_t n_features() const { return n_features_; }
  ClassIndex n_classes() const { return n_classes_; }
  bool empty() const { return labels_.empty(); }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * n_features_, n_features_};
  }
  double value(std::size_t i, std::size_t feature) const {
    return features_[i * n_features_ + feature];
  }
  ClassIndex label(std::size_t i) const { return labels_[i]; }

  std::span<const double> features() const { return features_; }
  std::span<const ClassIndex> labels() const { return labels_; }
  MatrixView matrix() const { return {features_, n_features_}; }

  /// Copies the given rows (duplicates allowed) into a new dataset with the
  /// same feature and class counts.
  Dataset subset(std::span<const std::size_t> indices) const;

  /// Same data, different declared class count. Labels must stay in range.
  Dataset with_classes(ClassIndex n_classes) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<double> features_;
  std::size_t n_features_ = 1;
  std::vector<ClassIndex> labels_;
  ClassIndex n_classes_ = 2;
};

/// Per-class label counts over `indices`.
std::vector<std::uint64_t> class_histogram(const Dataset& data,
                                           std::span<const std::size_t> indices);

}  // namespace sdf
