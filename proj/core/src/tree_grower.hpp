#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "sdf/dataset.hpp"
#include "sdf/rng.hpp"
#include "sdf/tree.hpp"
#include "split_search.hpp"

namespace sdf {

/// Top-down recursive CART growth shared by batch fitting and stream updates.
///
/// Growth only ever appends nodes and turns leaves into internal nodes; it
/// never touches an existing split. Split search at a node sees only the
/// samples handed to `grow`, whatever counts the node already carries.
class TreeGrower {
 public:
  TreeGrower(DecisionTree& tree, const Dataset& data, Rng& rng)
      : tree_(tree), data_(data), rng_(rng) {}

  /// Builds a fresh tree with `n_classes` count slots from `indices`.
  static DecisionTree fit(const Dataset& data, std::span<const std::size_t> indices,
                          ClassIndex n_classes, const SplitCriteria& criteria,
                          std::uint64_t seed, Rng& rng);

  /// Grows the subtree under leaf `leaf` using `indices` as training data.
  /// The caller is responsible for `leaf`'s own class counts.
  void grow(NodeId leaf, std::vector<std::size_t> indices);

 private:
  DecisionTree& tree_;
  const Dataset& data_;
  Rng& rng_;
  detail::SplitSearcher searcher_;
  std::vector<std::pair<NodeId, std::vector<std::size_t>>> stack_;
};

}  // namespace sdf
