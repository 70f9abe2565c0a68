#pragma once

#include <cstddef>
#include <optional>

namespace sdf {

/// How many candidate features are drawn at each node split.
struct MaxFeatures {
  enum class Rule { kAll, kSqrt, kFixed };

  Rule rule = Rule::kAll;
  std::size_t count = 0;  // only meaningful for kFixed

  static MaxFeatures all() { return {Rule::kAll, 0}; }
  static MaxFeatures sqrt() { return {Rule::kSqrt, 0}; }
  static MaxFeatures fixed(std::size_t m) { return {Rule::kFixed, m}; }

  /// Feature count m for `n_features` columns: all -> p, sqrt -> max(1, floor(sqrt(p))),
  /// fixed -> m. Throws std::invalid_argument unless 1 <= m <= p.
  std::size_t resolve(std::size_t n_features) const;

  friend bool operator==(const MaxFeatures&, const MaxFeatures&) = default;
};

struct SplitCriteria {
  std::size_t min_samples_split = 2;
  MaxFeatures max_features = MaxFeatures::all();
  double min_impurity_decrease = 0.0;
  /// Unbounded when empty.
  std::optional<std::size_t> max_depth;

  /// Throws std::invalid_argument for min_samples_split < 2 or a negative or
  /// non-finite min_impurity_decrease.
  void validate() const;

  friend bool operator==(const SplitCriteria&, const SplitCriteria&) = default;
};

}  // namespace sdf
