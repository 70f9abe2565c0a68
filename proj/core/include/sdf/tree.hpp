#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sdf/criteria.hpp"
#include "sdf/dataset.hpp"

namespace sdf {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

/// One node of a flat, array-backed binary tree.
///
/// Internal nodes hold an axis-aligned test `x[feature] <= threshold` (true
/// goes left). Leaves have `feature == kNoNode`. Class counts live in a
/// separate contiguous array owned by the tree.
struct Node {
  std::int32_t feature = kNoNode;
  NodeId left = kNoNode;
  NodeId right = kNoNode;
  std::uint32_t depth = 0;
  double threshold = 0.0;

  bool is_leaf() const { return feature == kNoNode; }

  friend bool operator==(const Node&, const Node&) = default;
};

/// Batch CART classifier (Gini, exhaustive threshold search).
///
/// Nodes are stored in creation order; node 0 is the root and node ids are
/// stable for the lifetime of the tree. Children of a split are appended as a
/// consecutive (left, right) pair, and subtrees are grown depth-first, left
/// child first.
class DecisionTree {
 public:
  /// Fits on every row of `data`. Throws std::invalid_argument for an empty
  /// dataset or invalid criteria.
  static DecisionTree fit(const Dataset& data, const SplitCriteria& criteria, std::uint64_t seed);

  /// Fits on the rows named by `indices` (repeats allowed, e.g. a bootstrap).
  static DecisionTree fit(const Dataset& data, std::span<const std::size_t> indices,
                          const SplitCriteria& criteria, std::uint64_t seed);

  /// Reassembles a tree from its parts (snapshot loading). Validates shape:
  /// children in range, leaves childless, counts sized nodes x n_classes.
  static DecisionTree from_parts(std::vector<Node> nodes, std::vector<std::uint64_t> class_counts,
                                 ClassIndex n_classes, std::size_t n_features,
                                 SplitCriteria criteria, std::uint64_t seed);

  /// Majority class of the leaf containing `x`; ties go to the lowest class.
  ClassIndex predict(std::span<const double> x) const;

  /// Id of the unique leaf whose region contains `x`.
  NodeId apply(std::span<const double> x) const;

  std::span<const Node> nodes() const { return nodes_; }
  const Node& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::span<const std::uint64_t> class_counts(NodeId id) const {
    return {counts_.data() + static_cast<std::size_t>(id) * static_cast<std::size_t>(n_classes_),
            static_cast<std::size_t>(n_classes_)};
  }
  std::span<const std::uint64_t> all_class_counts() const { return counts_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t leaf_count() const;
  std::size_t depth() const;

  ClassIndex n_classes() const { return n_classes_; }
  std::size_t n_features() const { return n_features_; }
  const SplitCriteria& criteria() const { return criteria_; }
  std::uint64_t seed() const { return seed_; }

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  friend class TreeGrower;
  friend class StreamTree;

  DecisionTree(ClassIndex n_classes, std::size_t n_features, SplitCriteria criteria,
               std::uint64_t seed);

  std::span<std::uint64_t> mutable_counts(NodeId id) {
    return {counts_.data() + static_cast<std::size_t>(id) * static_cast<std::size_t>(n_classes_),
            static_cast<std::size_t>(n_classes_)};
  }
  NodeId add_node(std::uint32_t depth);
  void check_input(std::span<const double> x) const;

  std::vector<Node> nodes_;
  std::vector<std::uint64_t> counts_;
  ClassIndex n_classes_ = 2;
  std::size_t n_features_ = 1;
  SplitCriteria criteria_;
  std::uint64_t seed_ = 0;
};

/// Index of the largest count, lowest index on ties.
ClassIndex majority_class(std::span<const std::uint64_t> counts);

}  // namespace sdf
