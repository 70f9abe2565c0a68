#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "sdf/dataset.hpp"

namespace sdf {

/// 1 - sum_k (c_k / total)^2. Throws std::domain_error when all counts are zero.
double gini_impurity(std::span<const std::uint64_t> class_counts);

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  double impurity_decrease = 0.0;

  friend bool operator==(const Split&, const Split&) = default;
};

/// Exhaustive CART split search under the Gini criterion.
///
/// Every midpoint between consecutive distinct values of every candidate
/// feature is scored by weighted Gini decrease; the best strictly positive
/// decrease wins, ties going to the lowest feature index and then the lowest
/// threshold. Samples with value <= threshold route left. Split quality is
/// compared exactly on integer counts, so ties are real ties.
///
/// `indices` may contain repeats (bootstrap samples count once per copy).
/// Returns nullopt when no split strictly reduces impurity.
std::optional<Split> best_split(const Dataset& data, std::span<const std::size_t> indices,
                                std::span<const std::size_t> candidate_features);

}  // namespace sdf
